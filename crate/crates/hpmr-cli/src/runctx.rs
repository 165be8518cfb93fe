//! Shared run plumbing: config resolution, the per-invocation run directory,
//! and the manifest.

use crate::CommonArgs;
use anyhow::{Context, Result};
use hpmr::config::RunConfig;
use std::path::{Path, PathBuf};

pub struct RunContext {
    pub config: RunConfig,
    pub config_hash: String,
    pub dir: PathBuf,
    command: &'static str,
    outputs: Vec<String>,
}

/// Loads the config file (or defaults), applies flag overrides, and creates
/// the run directory `<out>/<scenario>/<command>/`.
pub fn prepare(common: &CommonArgs, command: &'static str) -> Result<RunContext> {
    let mut config = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(workers) = common.workers {
        config.workers = workers;
    }
    if let Some(mode) = common.mode {
        config.mode = mode;
    }
    if let Some(out) = &common.out {
        config.out_dir = out.clone();
    }
    if let Some(budget) = common.budget {
        match command {
            "sample" => config.sample_budget = budget,
            "optimize" => config.optimize_budget = budget,
            "baseline" => config.baseline_budget = budget,
            _ => {}
        }
    }
    config.validate()?;
    let config_hash = config.canonical_hash();
    let dir = Path::new(&config.out_dir)
        .join(&config.scenario)
        .join(command);
    std::fs::create_dir_all(&dir)
        .with_context(|| format!("creating run directory {}", dir.display()))?;
    Ok(RunContext {
        config,
        config_hash,
        dir,
        command,
        outputs: Vec::new(),
    })
}

impl RunContext {
    /// Comment lines stamped into every CSV output.
    pub fn header_comments(&self) -> Vec<String> {
        vec![
            format!("config_hash = {}", self.config_hash),
            format!("seed = {}", self.config.seed),
            format!("scenario = {}", self.config.scenario),
            format!("mode = {}", self.config.mode),
        ]
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents)
            .with_context(|| format!("writing {}", path.display()))?;
        self.outputs.push(name.to_string());
        Ok(path)
    }

    /// Writes the manifest; contents are fully determined by (config, seed).
    pub fn finish(self) -> Result<()> {
        let manifest = format!(
            "command = {:?}\nscenario = {:?}\nseed = {}\nmode = {:?}\nconfig_hash = {:?}\noutputs = [{}]\n",
            self.command,
            self.config.scenario,
            self.config.seed,
            self.config.mode.to_string(),
            self.config_hash,
            self.outputs
                .iter()
                .map(|o| format!("{o:?}"))
                .collect::<Vec<_>>()
                .join(", ")
        );
        let path = self.dir.join("manifest.toml");
        std::fs::write(&path, manifest)
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}
