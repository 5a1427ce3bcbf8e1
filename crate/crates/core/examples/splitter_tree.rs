//! Builds the optimal splitter tree for a four-leaf fanout with ps = 2 and
//! X = 2, dumps part of the table and prints the tree.

use aqfp_bsopt::config::PhaseConfig;
use aqfp_bsopt::splitter::{build_tree_dp, optimal_tree, FanoutLeaf, TreeMode, TreeNodeKind, TreeParent};

fn parent(p: TreeParent) -> String {
    match p {
        TreeParent::Source => "source".into(),
        TreeParent::Node(k) => format!("n{k}"),
    }
}

fn main() {
    let cfg = PhaseConfig::with_skip(1).max_fanout(2);
    let leaves = [
        FanoutLeaf::new(2, 0),
        FanoutLeaf::new(4, 0),
        FanoutLeaf::new(5, 3),
        FanoutLeaf::new(9, 0),
    ];
    let tables = build_tree_dp(&leaves, &cfg, TreeMode::Reconstruct);
    print!("{}", tables.dump_slice(3, 4));
    println!("root: {}", tables.root());

    let tree = optimal_tree(&leaves, &cfg, TreeMode::Reconstruct).tree().expect("feasible");
    for (k, n) in tree.nodes.iter().enumerate() {
        let kind = match n.kind {
            TreeNodeKind::Buffer => "buffer",
            TreeNodeKind::Splitter => "splitter",
        };
        println!("n{k}: {kind} at depth {} under {}", n.depth, parent(n.parent));
    }
    for a in &tree.leaves {
        println!("leaf {} under {}", a.leaf + 1, parent(a.parent));
    }
    println!("{} buffers, {} splitters", tree.buffers(), tree.splitters());
}
