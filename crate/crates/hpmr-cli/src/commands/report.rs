//! Full-order evaluation and cost-breakdown report for one design.

use crate::runctx::prepare;
use crate::CommonArgs;
use anyhow::{bail, Context, Result};
use hpmr::design::{validate, DesignPoint};
use hpmr::econ::ledger::AccountGroup;
use hpmr::econ::{build_ledger, burnup_gwd_per_thm, ledger_csv, ledger_text};
use hpmr::geometry::derive_geometry;
use hpmr::inventory::{mass_inventory, power_density_mw_m3};
use hpmr::physics::{PhysicsEvaluator, RomEvaluator};

fn load_design(path: &str) -> Result<DesignPoint> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading design {path}"))?;
    let row = text
        .lines()
        .map(str::trim)
        .find(|l| {
            !l.is_empty()
                && !l.starts_with('#')
                && l.split(',').next().unwrap_or("").parse::<f64>().is_ok()
        })
        .ok_or_else(|| anyhow::anyhow!("no design row found in {path}"))?;
    Ok(DesignPoint::from_csv_row(row)?)
}

pub fn run(common: &CommonArgs, design_path: Option<&str>) -> Result<()> {
    let mut ctx = prepare(common, "report")?;
    let cfg = ctx.config.clone();

    let design = match design_path {
        Some(p) => load_design(p)?,
        None => DesignPoint::nominal(),
    };
    let validated = validate(design)?;

    let rom = RomEvaluator::new(cfg.rom, cfg.constants);
    let qois = rom.evaluate(&validated)?;
    if qois.lifetime_years <= 0.0 {
        bail!(
            "non-starter design: extrapolated lifetime {:.2} years, no ledger",
            qois.lifetime_years
        );
    }
    let ledger = build_ledger(
        &validated,
        qois.lifetime_years,
        cfg.mode,
        &cfg.constants,
        &cfg.costs,
        &cfg.finance,
    )?;

    let mut csv = String::new();
    for c in ctx.header_comments() {
        csv.push_str(&format!("# {c}\n"));
    }
    csv.push_str(&ledger_csv(&ledger));
    ctx.write("ledger.csv", &csv)?;

    // plot-ready per-group breakdown, largest line first within each group
    let mut groups_csv = String::from("group,account,lcoe_share_usd_per_mwh,noak_share_usd_per_mwh\n");
    for group in [AccountGroup::Fuel, AccountGroup::OandM, AccountGroup::Capital] {
        let mut lines: Vec<_> = ledger.accounts.iter().filter(|a| a.group == group).collect();
        lines.sort_by(|a, b| b.lcoe_share.partial_cmp(&a.lcoe_share).unwrap());
        for a in lines {
            groups_csv.push_str(&format!(
                "{},{},{:.6},{:.6}\n",
                group, a.name, a.lcoe_share, a.noak_share
            ));
        }
    }
    ctx.write("ledger_groups.csv", &groups_csv)?;

    let geometry = derive_geometry(&validated, &cfg.constants);
    let inventory = mass_inventory(&geometry, &validated, &cfg.constants);
    let mut text = String::new();
    text.push_str(&format!("design: {}\n", design.to_csv_row()));
    text.push_str(&format!(
        "lifetime {:.2} y | SDM {:.0} pcm | F_q {:.3} | F_dh {:.3} | q''_avg {:.6} | q''_max {:.6} MW/m^2\n",
        qois.lifetime_years, qois.sdm_pcm, qois.f_q, qois.f_delta_h, qois.q_avg_mw_m2, qois.q_max_mw_m2
    ));
    text.push_str(&format!(
        "ITC {:.3} (550-850 K) / {:.3} (850-1150 K) pcm/K\n",
        qois.itc_low_pcm_k, qois.itc_high_pcm_k
    ));
    text.push_str(&format!(
        "uranium {:.2} kg | U-235 {:.2} kg | burnup {:.3} GWd/tHM | power density {:.3} MW/m^3\n\n",
        inventory.uranium_kg,
        inventory.u235_kg,
        burnup_gwd_per_thm(&cfg.constants, qois.lifetime_years, inventory.uranium_kg),
        power_density_mw_m3(&cfg.constants, &geometry)
    ));
    text.push_str(&ledger_text(&ledger));
    ctx.write("report.txt", &text)?;

    println!(
        "report: FOAK {:.0} $/MWh, NOAK {:.0} $/MWh ({} mode), lifetime {:.2} y",
        ledger.foak_lcoe, ledger.noak_lcoe, cfg.mode, qois.lifetime_years
    );
    ctx.finish()
}
