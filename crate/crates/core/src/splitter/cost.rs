use std::fmt;

/// Cost of a (partial) splitter tree.
///
/// Ordered lexicographically on `(max_extra, total_extra, bs_count)`, with
/// `Infeasible` above every finite tuple. The derived `Ord` relies on the
/// variant and field order below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CostTuple {
    Finite {
        max_extra: u32,
        total_extra: u32,
        bs_count: u32,
    },
    Infeasible,
}

impl CostTuple {
    pub const ZERO: CostTuple = CostTuple::new(0, 0, 0);

    pub const fn new(max_extra: u32, total_extra: u32, bs_count: u32) -> Self {
        CostTuple::Finite {
            max_extra,
            total_extra,
            bs_count,
        }
    }

    /// Cost of a leaf that had to be delayed by `extra` levels beyond its slack.
    pub const fn extra(extra: u32) -> Self {
        CostTuple::new(extra, extra, 0)
    }

    pub const fn buffers(count: u32) -> Self {
        CostTuple::new(0, 0, count)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, CostTuple::Finite { .. })
    }

    pub fn max_extra(&self) -> Option<u32> {
        match *self {
            CostTuple::Finite { max_extra, .. } => Some(max_extra),
            CostTuple::Infeasible => None,
        }
    }

    pub fn total_extra(&self) -> Option<u32> {
        match *self {
            CostTuple::Finite { total_extra, .. } => Some(total_extra),
            CostTuple::Infeasible => None,
        }
    }

    pub fn bs_count(&self) -> Option<u32> {
        match *self {
            CostTuple::Finite { bs_count, .. } => Some(bs_count),
            CostTuple::Infeasible => None,
        }
    }

    /// Cost of two disjoint sets of branches: max of the maxima, sums otherwise.
    pub fn combine(self, other: CostTuple) -> CostTuple {
        match (self, other) {
            (
                CostTuple::Finite {
                    max_extra: m1,
                    total_extra: t1,
                    bs_count: b1,
                },
                CostTuple::Finite {
                    max_extra: m2,
                    total_extra: t2,
                    bs_count: b2,
                },
            ) => CostTuple::new(m1.max(m2), t1 + t2, b1 + b2),
            _ => CostTuple::Infeasible,
        }
    }

    /// Same tree with one more buffer or splitter on top.
    pub fn plus_node(self) -> CostTuple {
        self.combine(CostTuple::buffers(1))
    }
}

impl fmt::Display for CostTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostTuple::Finite {
                max_extra,
                total_extra,
                bs_count,
            } => write!(f, "{{{max_extra},{total_extra},{bs_count}}}"),
            CostTuple::Infeasible => f.write_str("{inf}"),
        }
    }
}
