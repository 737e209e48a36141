//! Splitting a redundant search output with the code invariant, then
//! confirming the split with exact canonical forms.

use piw::classify::dedup_h_classes;
use piw::invariant::{code_invariant, partition_by_invariant};
use piw::search::rep_piw_mindepth;

fn main() -> piw::Result<()> {
    let list = rep_piw_mindepth(5, 5, 9, 2)?;
    let depth = 2;
    let groups = partition_by_invariant(&list, depth, Some(3))?;
    println!("{} matrices, {} invariant groups", list.len(), groups.len());
    for g in &groups {
        let first = &list[g.members[0]];
        println!("  {} x [{}] {} codes", g.members.len(), g.invariant.digest(), g.invariant.codes.len());
        assert_eq!(code_invariant(first, depth, 3)?, g.invariant);
    }

    // the invariant never separates equivalent matrices, but may fail to
    // separate inequivalent ones
    let classes = dedup_h_classes(&list);
    println!("{} exact H-classes", classes.len());
    assert!(groups.len() <= classes.len());
    Ok(())
}
