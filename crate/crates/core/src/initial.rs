//! Initial level assignment before any splitter exists.
//!
//! Minimizes `sum C_ij / |fanouts(i)|` over the edge-span model, with
//! lower bounds on the level sums of fanout subsets: for every source `i`
//! and subset `S` of its fanout edges,
//! `sum_{j in S} L_j - |S| L_i >= |S| + f(|S|)` where `f` is the smallest
//! leaf-depth sum of a splitter tree with `|S|` leaves.
//!
//! Subset rows are added lazily. For sources with at most
//! `enum_threshold` fanouts every subset is implied, and the most violated
//! row of each size is the one over the smallest fanout levels. Larger
//! sources use a fixed random sample of subsets that is scanned for
//! violations.

use std::collections::HashSet;

use log::debug;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::PhaseConfig;
use crate::error::{OptimizeError, Step};
use crate::lp::{solve_lp_with_rows, LinearProgram, LpStatus, Row, Sense, VarId};
use crate::model::{level_model, round_levels, LevelModel};
use crate::netlist::{Levels, Netlist, NodeId};

const CUT_TOL: f64 = 1e-7;

/// Smallest sum over leaves of the number of splitters on the path from
/// the root, over all trees with `m` leaves and at most `x` outputs per
/// splitter.
pub fn min_tree_path_sum(m: usize, x: usize) -> u64 {
    min_tree_path_sums(m, x)[m]
}

/// `f(0..=m)` for fanout limit `x` (`f(0)` is 0 and unused).
pub fn min_tree_path_sums(m: usize, x: usize) -> Vec<u64> {
    assert!(x >= 2, "splitter fanout must be at least 2");
    let mut f = vec![0u64; m + 1];
    // g[k][s]: least total f over k subtrees holding s leaves
    let mut g = vec![vec![u64::MAX; m + 1]; x + 1];
    for s in 1..=m {
        if s >= 2 {
            let best = (2..=x.min(s)).map(|k| g[k][s]).min().unwrap_or(u64::MAX);
            f[s] = s as u64 + best;
        }
        g[1][s] = f[s];
        for k in 2..=x {
            for s2 in s..=m {
                // extend k-1 subtrees holding s2-s leaves by one of size s
                let rest = g[k - 1][s2 - s];
                if s2 - s >= k - 1 && rest != u64::MAX && s2 > s {
                    g[k][s2] = g[k][s2].min(rest + f[s]);
                }
            }
        }
    }
    f
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-node generator, independent of the order nodes are visited in.
pub fn node_rng(seed: u64, node: NodeId) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix(seed ^ splitmix(node.0 as u64)))
}

/// Fanout subsets of size at least 2, as sorted position lists into the
/// fanout list of `node`.
///
/// All of them when `t <= enum_threshold` (or when there are no more than
/// the cap); otherwise `subset_cap` distinct subsets drawn by picking a
/// size uniformly in `2..=t` and then a subset of that size uniformly.
pub fn sample_fanout_subsets(t: usize, cfg: &PhaseConfig, node: NodeId) -> Vec<Vec<u32>> {
    if t < 2 {
        return Vec::new();
    }
    let available = if t >= 64 {
        u64::MAX
    } else {
        (1u64 << t) - t as u64 - 1
    };
    if t <= cfg.enum_threshold || available <= cfg.subset_cap as u64 {
        assert!(t < 32, "enumerating subsets of {t} fanouts");
        return (0u32..1 << t)
            .filter(|m| m.count_ones() >= 2)
            .map(|m| (0..t as u32).filter(|b| m >> b & 1 == 1).collect())
            .collect();
    }
    let mut rng = node_rng(cfg.seed, node);
    let mut seen: HashSet<Vec<u32>> = HashSet::with_capacity(cfg.subset_cap);
    let mut out = Vec::with_capacity(cfg.subset_cap);
    while out.len() < cfg.subset_cap {
        let size = rng.gen_range(2..=t);
        let mut s: Vec<u32> = sample(&mut rng, t, size).into_iter().map(|i| i as u32).collect();
        s.sort_unstable();
        if seen.insert(s.clone()) {
            out.push(s);
        }
    }
    out
}

/// One source with its fanout edges and subset family.
struct SubsetFamily {
    source: NodeId,
    /// Fanout edge heads, as level variables.
    heads: Vec<VarId>,
    /// `None` when every subset is implied.
    sampled: Option<Vec<Vec<u32>>>,
}

fn families(net: &Netlist, cfg: &PhaseConfig, model: &LevelModel) -> Vec<SubsetFamily> {
    net.node_ids()
        .filter(|&n| net.fanout_count(n) >= 2)
        .map(|n| {
            let heads: Vec<VarId> = net
                .fanout_edges(n)
                .iter()
                .map(|&e| model.level_var[net.edge(e).dst.0])
                .collect();
            let t = heads.len();
            let sampled = (t > cfg.enum_threshold).then(|| sample_fanout_subsets(t, cfg, n));
            SubsetFamily {
                source: n,
                heads,
                sampled,
            }
        })
        .collect()
}

fn subset_row(src: VarId, heads: &[VarId], f: &[u64]) -> Row {
    let m = heads.len();
    let mut coeffs: Vec<(VarId, f64)> = heads.iter().map(|&h| (h, 1.0)).collect();
    coeffs.push((src, -(m as f64)));
    Row::new(coeffs, Sense::Ge, (m as u64 + f[m]) as f64)
}

/// The full initial program with every subset row written out. Meant for
/// inspection and small netlists; the solver path adds rows lazily.
pub fn build_initial_lp(net: &Netlist, cfg: &PhaseConfig) -> LinearProgram {
    let (mut model, fams, f) = base_model(net, cfg);
    for fam in &fams {
        let src = model.level_var[fam.source.0];
        let t = fam.heads.len();
        let subsets = fam
            .sampled
            .clone()
            .unwrap_or_else(|| sample_fanout_subsets(t, cfg, fam.source));
        for s in subsets {
            let heads: Vec<VarId> = s.iter().map(|&k| fam.heads[k as usize]).collect();
            model.lp.add_row(subset_row(src, &heads, &f));
        }
    }
    model.lp
}

fn base_model(net: &Netlist, cfg: &PhaseConfig) -> (LevelModel, Vec<SubsetFamily>, Vec<u64>) {
    let model = level_model(net, cfg, |e| {
        1.0 / net.fanout_count(net.edge(e).src) as f64
    });
    let fams = families(net, cfg, &model);
    let max_t = fams.iter().map(|f| f.heads.len()).max().unwrap_or(1);
    let f = min_tree_path_sums(max_t, cfg.max_fanout);
    (model, fams, f)
}

#[derive(Debug, Clone)]
pub struct InitialLevels {
    pub levels: Levels,
    /// Objective of the relaxation before rounding.
    pub lp_objective: f64,
    /// Subset rows that were added during the solve.
    pub subset_rows: usize,
    pub lp_vars: usize,
    /// Rows in the final program, subset rows included.
    pub lp_rows: usize,
}

fn separate(values: &[f64], model: &LevelModel, fams: &[SubsetFamily], f: &[u64]) -> Vec<Row> {
    let mut cuts = Vec::new();
    for fam in fams {
        let src = model.level_var[fam.source.0];
        let li = values[src.0];
        let lv = |k: usize| values[fam.heads[k].0];
        match &fam.sampled {
            None => {
                let mut idx: Vec<usize> = (0..fam.heads.len()).collect();
                idx.sort_by(|&a, &b| lv(a).total_cmp(&lv(b)).then(a.cmp(&b)));
                let mut sum = 0.0;
                for (m0, &k) in idx.iter().enumerate() {
                    sum += lv(k);
                    let m = m0 + 1;
                    if m >= 2 && sum - m as f64 * li < (m as u64 + f[m]) as f64 - CUT_TOL {
                        let heads: Vec<VarId> = idx[..m].iter().map(|&k| fam.heads[k]).collect();
                        cuts.push(subset_row(src, &heads, f));
                    }
                }
            }
            Some(subsets) => {
                // the most violated sampled row of each size
                let mut worst: Vec<Option<(f64, usize)>> = vec![None; fam.heads.len() + 1];
                for (si, s) in subsets.iter().enumerate() {
                    let m = s.len();
                    let lhs: f64 = s.iter().map(|&k| lv(k as usize)).sum::<f64>() - m as f64 * li;
                    let gap = (m as u64 + f[m]) as f64 - lhs;
                    if gap > CUT_TOL && worst[m].is_none_or(|(g, _)| gap > g) {
                        worst[m] = Some((gap, si));
                    }
                }
                for (_, si) in worst.into_iter().flatten() {
                    let heads: Vec<VarId> =
                        subsets[si].iter().map(|&k| fam.heads[k as usize]).collect();
                    cuts.push(subset_row(src, &heads, f));
                }
            }
        }
    }
    cuts
}

/// Step 1: solve the relaxation and round every level up.
pub fn assign_initial_levels(net: &Netlist, cfg: &PhaseConfig) -> Result<InitialLevels, OptimizeError> {
    cfg.validate()?;
    let (model, fams, f) = base_model(net, cfg);
    let (sol, added) = solve_lp_with_rows(&model.lp, |v| separate(v, &model, &fams, &f))
        .map_err(|source| OptimizeError::Solver {
            step: Step::InitialLevels,
            source,
        })?;
    if sol.status != LpStatus::Optimal {
        return Err(OptimizeError::Status {
            step: Step::InitialLevels,
            status: sol.status,
        });
    }
    debug!(
        "initial levels: objective {:.3}, {} subset rows",
        sol.objective_value,
        added.len()
    );
    Ok(InitialLevels {
        levels: round_levels(&model, &sol.values),
        lp_objective: sol.objective_value,
        subset_rows: added.len(),
        lp_vars: model.lp.num_vars(),
        lp_rows: model.lp.rows().len() + added.len(),
    })
}
