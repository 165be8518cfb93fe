use hpmr::design::{validate, DesignPoint};
use hpmr::econ::{build_ledger, CostDatabase, FinanceAssumptions, ReflectorCostMode};
use hpmr::physics::{PhysicsEvaluator, RomEvaluator};
use hpmr::ReactorConstants;

fn main() {
    let rom = RomEvaluator::with_defaults();
    let d = validate(DesignPoint::nominal()).unwrap();
    let q = rom.evaluate(&d).unwrap();
    println!("{q:#?}");
    let c = ReactorConstants::default();
    let db = CostDatabase::default();
    let fin = FinanceAssumptions::default();
    for mode in [ReflectorCostMode::Be, ReflectorCostMode::Graphite] {
        let l = build_ledger(&d, q.lifetime_years, mode, &c, &db, &fin).unwrap();
        println!("{mode}: FOAK {:.0} NOAK {:.0} cf {:.4} direct {:.1}M occ {:.1}M tci {:.1}M",
            l.foak_lcoe, l.noak_lcoe, l.capacity_factor, l.direct_cost_2024/1e6, l.occ_2024/1e6, l.tci_2024/1e6);
        for a in &l.accounts {
            if a.lcoe_share > 100.0 {
                println!("   {:<40} {:>8} {:>10.0} $/MWh", a.name, a.group.to_string(), a.lcoe_share);
            }
        }
    }
}
