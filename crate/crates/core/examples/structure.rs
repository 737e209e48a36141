//! Block-sum decomposition and TH-classes of the square weighing matrices of
//! one order.

use piw::classify::{decompose, dedup_h_classes, dedup_th_classes, structure_label, CatalogCache};
use piw::search::rep_piw;

fn main() -> piw::Result<()> {
    let (order, k) = (5, 9);
    let h = dedup_h_classes(&rep_piw(order, order, k)?);
    let th = dedup_th_classes(&h)?;
    println!("IW({order},{k}): {} H-classes, {} TH-classes", h.len(), th.len());

    let mut cache = CatalogCache::new();
    let mut catalog = cache.catalog(order - 1, k, 1)?;
    let primitive: Vec<_> = th
        .iter()
        .filter(|c| decompose(&c.representative).map(|d| d.primitive).unwrap_or(false))
        .map(|c| c.representative.clone())
        .collect();
    catalog.insert(order, primitive);

    for c in &th {
        let dec = decompose(&c.representative)?;
        let label = structure_label(&dec, &catalog)?;
        println!(
            "\n{label}  ({} H-class{}, self-transpose: {})\n{}",
            c.h_classes.len(),
            if c.h_classes.len() == 1 { "" } else { "es" },
            c.self_transpose,
            c.representative
        );
    }
    Ok(())
}
