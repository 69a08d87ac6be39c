//! The pairing process for clusters in the popular regime: popular colors
//! are handed out one at a time, each to a non-adjacent pair when possible.

use alloc::vec::Vec;

use super::context::{ClusterBigraph, RegimeReport};
use crate::error::{Error, Result};
use crate::palette::{Params, ProcessParams};
use crate::{Color, Vertex};

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "action", rename_all = "lowercase"))]
pub enum StepAction {
    /// (I): a non-adjacent pair shares the color.
    Pair { x: Vertex, y: Vertex },
    /// (II): one vertex of minimum `d_H` takes the color.
    Single { z: Vertex, h_degree: usize },
    /// (III): nobody left can use the color.
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StepRecord {
    pub i: usize,
    pub gamma: Color,
    pub j_size: usize,
    pub h_gamma: usize,
    pub action: StepAction,
}

impl StepRecord {
    pub fn removed(&self) -> Vec<Vertex> {
        match self.action {
            StepAction::Pair { x, y } => alloc::vec![x, y],
            StepAction::Single { z, .. } => alloc::vec![z],
            StepAction::Empty => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProcessState {
    pub params: ProcessParams,
    /// `γ_1, …, γ_m`.
    pub colors: Vec<Color>,
    pub steps: Vec<StepRecord>,
    /// Surviving members `C_m` (global ids).
    pub surviving: Vec<Vertex>,
    /// Pairs `N_m`.
    pub pairs: Vec<(Vertex, Vertex)>,
    /// Colors handed out by the process.
    pub assignment: Vec<(Vertex, Color)>,
    pub s1_max: usize,
    pub s1_bound: f64,
    pub s1: bool,
    pub s2: bool,
    pub s3: bool,
    /// `|H_{γ_i}|` non-increasing and at least `2θζD²/3` for every step.
    pub ordering_bound_holds: bool,
}

impl ProcessState {
    pub fn succeeded(&self) -> bool {
        self.s1 && self.s2 && self.s3
    }
}

/// Runs the process on trimmed lists (local order). Requires the popular
/// regime with large `ζ`.
pub fn run_process(
    ctx: &ClusterBigraph,
    regime: &RegimeReport,
    lists: &[Vec<Color>],
    params: &Params,
    log_n: f64,
) -> Result<ProcessState> {
    if !regime.r1 || !regime.zeta_large {
        return Err(Error::Parameter("the process needs the popular regime with large zeta".into()));
    }
    let n = ctx.len();
    let k = lists.iter().map(Vec::len).max().unwrap_or(0) as f64;
    let pp = params.resolve_process(ctx.zeta, ctx.d, k, regime.popular.len())?;

    let mut ranked: Vec<(usize, Color)> = regime
        .popular
        .iter()
        .map(|&c| (ctx.h_edge_list().filter(|&(i, j)| ctx.allows(i, c) && ctx.allows(j, c)).count(), c))
        .collect();
    ranked.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    ranked.truncate(pp.m);
    let colors: Vec<Color> = ranked.iter().map(|r| r.1).collect();

    let d = ctx.d as f64;
    let floor = 2.0 * params.theta() * ctx.zeta * d * d / 3.0;
    let ordering_bound_holds = ranked.iter().all(|r| r.0 as f64 >= floor);

    let has = |i: usize, c: Color| lists[i].binary_search(&c).is_ok();
    let mut alive = alloc::vec![true; n];
    let mut alive_count = n;
    let mut singles = 0;
    let mut steps = Vec::with_capacity(colors.len());
    let mut pairs = Vec::new();
    let mut assignment = Vec::new();
    let mut s2 = true;
    let s2_limit = 6.0 * ctx.zeta * d / params.delta;
    for (idx, &(h_gamma, gamma)) in ranked.iter().enumerate() {
        let j: Vec<usize> = (0..n).filter(|&i| alive[i] && has(i, gamma)).collect();
        let pair = j.iter().find_map(|&a| j.iter().find(|&&b| b > a && ctx.h_has_edge(a, b)).map(|&b| (a, b)));
        let action = if let Some((a, b)) = pair {
            let (x, y) = (ctx.cluster[a], ctx.cluster[b]);
            alive[a] = false;
            alive[b] = false;
            alive_count -= 2;
            pairs.push((x, y));
            assignment.push((x, gamma));
            assignment.push((y, gamma));
            StepAction::Pair { x, y }
        } else if let Some(&z) = j.iter().min_by_key(|&&i| (ctx.h_degree(i), i)) {
            alive[z] = false;
            alive_count -= 1;
            singles += 1;
            let h_degree = ctx.h_degree(z);
            if h_degree as f64 >= s2_limit {
                s2 = false;
            }
            assignment.push((ctx.cluster[z], gamma));
            StepAction::Single { z: ctx.cluster[z], h_degree }
        } else {
            s2 = false;
            StepAction::Empty
        };
        debug_assert_eq!(alive_count + 2 * pairs.len() + singles, n);
        steps.push(StepRecord { i: idx + 1, gamma, j_size: j.len(), h_gamma, action });
    }

    let s1_max = (0..n).map(|i| colors.iter().filter(|&&c| has(i, c)).count()).max().unwrap_or(0);
    let s1_bound = params.s1_bound(log_n);
    Ok(ProcessState {
        s1: s1_max as f64 <= s1_bound,
        s2,
        s3: pairs.len() as f64 >= pp.eta * d,
        params: pp,
        colors,
        steps,
        surviving: (0..n).filter(|&i| alive[i]).map(|i| ctx.cluster[i]).collect(),
        pairs,
        assignment,
        s1_max,
        s1_bound,
        ordering_bound_holds,
    })
}
