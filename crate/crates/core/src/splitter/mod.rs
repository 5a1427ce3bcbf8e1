//! Splitter and buffer trees for multi-fanout sources.

mod apply;
mod cost;
mod dp;
mod oracle;
mod search;
mod tree;

pub use apply::{apply_tree, fanout_leaves, push_forward};
pub use cost::CostTuple;
pub use dp::{
    build_tree_dp, build_tree_dp_with_cap, leaf_connection_cost, DpTables, FanoutLeaf,
    PivotEntry, TreeMode,
};
pub use oracle::{brute_force_tree_oracle, ORACLE_MAX_DELAY, ORACLE_MAX_LEAVES};
pub use search::{optimal_tree, TreeSolution};
pub use tree::{backtrack_tree, LeafAttachment, SplitterTree, TreeNode, TreeNodeKind, TreeParent};
