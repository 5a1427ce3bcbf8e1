//! Recovering an explicit tree from filled tables.

use crate::error::TreeError;

use super::cost::CostTuple;
use super::dp::{DpTables, FanoutLeaf, TreeMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreeNodeKind {
    Buffer,
    Splitter,
}

/// Where a tree node or leaf hangs from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreeParent {
    Source,
    Node(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TreeNode {
    pub kind: TreeNodeKind,
    /// Levels below the source.
    pub depth: u32,
    pub parent: TreeParent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LeafAttachment {
    /// Index into the (sorted) leaf list the tables were built from.
    pub leaf: usize,
    pub parent: TreeParent,
    /// Levels the fanout must move down to be fed from `parent`.
    pub extra: u32,
}

/// Buffers and splitters between one source and its fanouts.
///
/// Nodes are listed parents-first; `leaves` is indexed by leaf position.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SplitterTree {
    pub nodes: Vec<TreeNode>,
    pub leaves: Vec<LeafAttachment>,
}

impl SplitterTree {
    pub fn buffers(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| n.kind == TreeNodeKind::Buffer)
            .count()
    }

    pub fn splitters(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| n.kind == TreeNodeKind::Splitter)
            .count()
    }

    fn parent_depth(&self, p: TreeParent) -> u32 {
        match p {
            TreeParent::Source => 0,
            TreeParent::Node(i) => self.nodes[i].depth,
        }
    }

    /// Recomputes the cost tuple of this tree for the given leaves.
    pub fn cost(&self, leaves: &[FanoutLeaf], mode: TreeMode) -> CostTuple {
        let mut total = CostTuple::buffers(self.nodes.len() as u32);
        for a in &self.leaves {
            let slack = leaves[a.leaf].slack;
            if a.extra > slack {
                total = match mode {
                    TreeMode::Initial => total.combine(CostTuple::extra(a.extra - slack)),
                    TreeMode::Reconstruct => CostTuple::Infeasible,
                };
            }
        }
        total
    }

    /// Structural problems: fanout arity, hop spans, and missing leaves.
    pub fn defects(&self, leaves: &[FanoutLeaf], max_fanout: usize, ps: u32) -> Vec<String> {
        let mut out = Vec::new();
        let mut children = vec![0usize; self.nodes.len()];
        let mut source_children = 0usize;
        let mut count = |p: TreeParent| match p {
            TreeParent::Source => source_children += 1,
            TreeParent::Node(i) => children[i] += 1,
        };
        for n in &self.nodes {
            count(n.parent);
        }
        for a in &self.leaves {
            count(a.parent);
        }
        if source_children != 1 {
            out.push(format!("source drives {source_children} tree children"));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            let ok = match n.kind {
                TreeNodeKind::Buffer => children[i] == 1,
                TreeNodeKind::Splitter => (2..=max_fanout).contains(&children[i]),
            };
            if !ok {
                out.push(format!("{:?} {i} has {} children", n.kind, children[i]));
            }
            let hop = n.depth as i64 - self.parent_depth(n.parent) as i64;
            if hop < 1 || hop > ps as i64 {
                out.push(format!("node {i} hop {hop}"));
            }
        }
        if self.leaves.len() != leaves.len() {
            out.push(format!(
                "{} of {} leaves attached",
                self.leaves.len(),
                leaves.len()
            ));
        }
        for a in &self.leaves {
            let depth = leaves[a.leaf].delay + 1 + a.extra;
            let hop = depth as i64 - self.parent_depth(a.parent) as i64;
            if hop < 1 || hop > ps as i64 {
                out.push(format!("leaf {} hop {hop}", a.leaf));
            }
        }
        out
    }
}

/// Rebuilds the optimal tree by following pivots from the root state.
pub fn backtrack_tree(tables: &DpTables) -> Result<SplitterTree, TreeError> {
    let root = tables.root();
    if !root.is_finite() {
        return Err(TreeError::Infeasible);
    }
    let mut tree = SplitterTree::default();
    let mut slots: Vec<Option<LeafAttachment>> = vec![None; tables.n()];
    walk(tables, 1, tables.n(), 1, 0, TreeParent::Source, &mut tree, &mut slots)?;
    tree.leaves = slots
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or(TreeError::Infeasible)?;
    let found = tree.cost(tables.leaves(), tables.mode());
    if found != root {
        return Err(TreeError::Inconsistent {
            expected: root,
            found,
        });
    }
    Ok(tree)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    t: &DpTables,
    l: usize,
    r: usize,
    b: usize,
    d: u32,
    parent: TreeParent,
    tree: &mut SplitterTree,
    slots: &mut [Option<LeafAttachment>],
) -> Result<(), TreeError> {
    if !t.dp(l, r, b, d).is_finite() {
        return Err(TreeError::Infeasible);
    }
    if b == 1 && l == r {
        let leaf = t.leaves()[l - 1];
        let mut parent = parent;
        let extra = if d <= leaf.delay {
            let ps = t.span();
            let chain = (leaf.delay - d) / ps;
            for i in 1..=chain {
                tree.nodes.push(TreeNode {
                    kind: TreeNodeKind::Buffer,
                    depth: d + i * ps,
                    parent,
                });
                parent = TreeParent::Node(tree.nodes.len() - 1);
            }
            0
        } else {
            d - leaf.delay
        };
        slots[l - 1] = Some(LeafAttachment {
            leaf: l - 1,
            parent,
            extra,
        });
        return Ok(());
    }
    let p = t.pt(l, r, b, d).ok_or(TreeError::Infeasible)?;
    match p.split {
        None => {
            let kind = if p.branches == 1 {
                TreeNodeKind::Buffer
            } else {
                TreeNodeKind::Splitter
            };
            tree.nodes.push(TreeNode {
                kind,
                depth: p.depth_next,
                parent,
            });
            let me = TreeParent::Node(tree.nodes.len() - 1);
            walk(t, l, r, p.branches, p.depth_next, me, tree, slots)
        }
        Some(split) => {
            walk(t, l, split, p.branches, d, parent, tree, slots)?;
            walk(t, split + 1, r, b - p.branches, d, parent, tree, slots)
        }
    }
}
