//! The rank-two catalog: axioms, Weyl group orders and alcove shapes.

use fracweyl::weyl::{rank2_catalog, CatalogDump, CATALOG_NAMES};

fn main() -> fracweyl::Result<()> {
    for name in CATALOG_NAMES {
        let w = rank2_catalog(name)?;
        let report = w.system.validate();
        let dump = CatalogDump::new(&w)?;
        let angles: Vec<String> = dump.alcove_angles.iter().map(|a| format!("{:.0}°", a.to_degrees())).collect();
        println!(
            "{name:6} roots {:2}  valid {}  |W| = {:2}  alcove angles [{}]",
            dump.roots.len(),
            report.passes(),
            dump.finite_weyl_order,
            angles.join(", ")
        );
    }
    Ok(())
}
