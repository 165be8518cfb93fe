fn main() {
    let cfg = hpmr::config::RunConfig::default();
    print!("{}", cfg.to_toml());
}
