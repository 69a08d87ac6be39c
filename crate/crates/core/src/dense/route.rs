//! Extending a partial coloring to one cluster: route selection, the
//! staged matching route and the direct-matching fallback.

use alloc::vec;
use alloc::vec::Vec;

use super::bigraph::{Bigraph, Matching};
use super::context::{classify_regime, ClusterBigraph, RegimeReport};
use super::process::{run_process, ProcessState};
use crate::palette::Params;
use crate::{Color, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Route {
    /// Small `ζ`: match the whole cluster into its lists.
    Direct,
    /// Popular regime: pairing process, then a matching of the rest.
    Process,
    /// Hall route when many members see many unpopular colors.
    Hall,
    /// Matchings into popular and unpopular colors in stages.
    Staged,
}

/// Runtime checks of the events the staged route relies on.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StagedLog {
    pub i_size: usize,
    pub i0_size: usize,
    pub i1_size: usize,
    pub a_size: usize,
    /// `|L_v ∩ U| < δ log n / 3` off `S`.
    pub few_unpopular_off_s: bool,
    /// No member of `I₀` has fewer than `θD` popular allowed colors.
    pub i0_popular_rich: bool,
    /// `|L_v ∩ P₀| ≤ δ log n / 3` everywhere.
    pub few_p0: bool,
    pub m0_perfect: bool,
    pub u0_size: usize,
    /// `|U₀| ≤ θD`.
    pub u0_small: bool,
    /// Stage that failed, if any.
    pub failed_stage: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClusterFailure {
    pub route: Route,
    pub fallback_tried: bool,
    /// Hall deficiency of the final matching attempt.
    pub deficiency: isize,
    /// Members violating Hall's condition (global ids).
    pub witness: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClusterOutcome {
    pub route: Route,
    pub regime: RegimeReport,
    pub process: Option<ProcessState>,
    pub staged: Option<StagedLog>,
    pub fallback_used: bool,
    pub result: Result<Vec<(Vertex, Color)>, ClusterFailure>,
}

impl ClusterOutcome {
    pub fn succeeded(&self) -> bool {
        self.result.is_ok()
    }
}

/// Matches the local `members` into colors admitted by `keep`, using the
/// trimmed lists. Returns local assignments or the Hall report.
fn match_members<F: Fn(Color) -> bool>(
    ctx: &ClusterBigraph,
    lists: &[Vec<Color>],
    members: &[usize],
    keep: F,
    initial: Option<&[(usize, Color)]>,
) -> Result<Vec<(usize, Color)>, (isize, Vec<Vertex>)> {
    let adj: Vec<Vec<usize>> = members.iter().map(|&i| lists[i].iter().copied().filter(|&c| keep(c)).collect()).collect();
    let b = Bigraph::new(ctx.gamma_size, adj).expect("colors lie in the palette");
    let mut start = Matching { mate: vec![None; members.len()] };
    for &(i, c) in initial.unwrap_or(&[]) {
        if let Ok(pos) = members.binary_search(&i) {
            if b.has_edge(pos, c) {
                start.mate[pos] = Some(c);
            }
        }
    }
    let m = b.max_matching_from(start);
    if m.is_u_perfect() {
        Ok(m.pairs().map(|(u, c)| (members[u], c)).collect())
    } else {
        let hall = b.hall_check();
        Err((hall.deficiency, hall.witness.iter().map(|&u| ctx.cluster[members[u]]).collect()))
    }
}

/// Extends the coloring to the cluster from trimmed lists (local order).
pub fn color_cluster(ctx: &ClusterBigraph, lists: &[Vec<Color>], params: &Params, log_n: f64) -> ClusterOutcome {
    let regime = classify_regime(ctx, params);
    let all: Vec<usize> = (0..ctx.len()).collect();
    let route = if !regime.zeta_large {
        Route::Direct
    } else if regime.r1 {
        Route::Process
    } else if regime.s_size {
        Route::Hall
    } else {
        Route::Staged
    };

    let mut process = None;
    let mut staged = None;
    let attempt: Result<Vec<(usize, Color)>, (isize, Vec<Vertex>)> = match route {
        Route::Direct | Route::Hall => match_members(ctx, lists, &all, |_| true, None),
        Route::Process => match run_process(ctx, &regime, lists, params, log_n) {
            Ok(state) if state.succeeded() => {
                let used = state.colors.clone();
                let surviving: Vec<usize> =
                    state.surviving.iter().map(|v| ctx.cluster.binary_search(v).expect("member")).collect();
                let res = match_members(ctx, lists, &surviving, |c| !used.contains(&c), None).map(|mut m| {
                    m.extend(state.assignment.iter().map(|&(v, c)| (ctx.cluster.binary_search(&v).expect("member"), c)));
                    m
                });
                process = Some(state);
                res
            }
            Ok(state) => {
                process = Some(state);
                Err((0, Vec::new()))
            }
            Err(_) => Err((0, Vec::new())),
        },
        Route::Staged => {
            let (res, log) = staged_route(ctx, &regime, lists, params, log_n);
            staged = Some(log);
            res
        }
    };

    let finish = |local: Vec<(usize, Color)>| {
        let mut out: Vec<(Vertex, Color)> = local.into_iter().map(|(i, c)| (ctx.cluster[i], c)).collect();
        out.sort_unstable();
        out
    };
    let (result, fallback_used) = match attempt {
        Ok(local) => (Ok(finish(local)), false),
        Err(first) => {
            let fallback_tried = route != Route::Direct && route != Route::Hall;
            let last = if fallback_tried { match_members(ctx, lists, &all, |_| true, None) } else { Err(first) };
            match last {
                Ok(local) => (Ok(finish(local)), true),
                Err((deficiency, witness)) => {
                    (Err(ClusterFailure { route, fallback_tried, deficiency, witness }), fallback_tried)
                }
            }
        }
    };
    ClusterOutcome { route, regime, process, staged, fallback_used, result }
}

type Attempt = Result<Vec<(usize, Color)>, (isize, Vec<Vertex>)>;

fn staged_route(
    ctx: &ClusterBigraph,
    regime: &RegimeReport,
    lists: &[Vec<Color>],
    params: &Params,
    log_n: f64,
) -> (Attempt, StagedLog) {
    let n = ctx.len();
    let d = ctx.d as f64;
    let theta = params.theta();
    let popular = |c: &Color| regime.is_popular(*c);
    let d_u = |i: usize| ctx.allowed[i].iter().filter(|c| !popular(c)).count();
    let l_u = |i: usize| lists[i].iter().filter(|c| !popular(c)).count();
    let k = lists.iter().map(Vec::len).max().unwrap_or(0) as f64;
    let small = params.delta * log_n / 3.0;
    let in_s = |i: usize| regime.s_set.binary_search(&i).is_ok();

    let big_i: Vec<usize> = (0..n).filter(|&i| d_u(i) as f64 > d / 3.0).collect();
    let (i0, i1): (Vec<usize>, Vec<usize>) = big_i.iter().partition(|&&i| (l_u(i) as f64) < k / 4.0);
    let mut log = StagedLog {
        i_size: big_i.len(),
        i0_size: i0.len(),
        i1_size: i1.len(),
        few_unpopular_off_s: (0..n).filter(|&i| !in_s(i)).all(|i| (l_u(i) as f64) < small),
        i0_popular_rich: i0.iter().all(|&i| (ctx.allowed[i].len() - d_u(i)) as f64 >= theta * d),
        ..StagedLog::default()
    };

    // (II) I₀ into popular colors
    let m_i0 = match match_members(ctx, lists, &i0, |c| regime.is_popular(c), None) {
        Ok(m) => m,
        Err(e) => {
            log.failed_stage = Some(2);
            return (Err(e), log);
        }
    };
    let p0: Vec<Color> = {
        let mut p: Vec<Color> = m_i0.iter().map(|x| x.1).collect();
        p.sort_unstable();
        p
    };
    let in_p0 = |c: &Color| p0.binary_search(c).is_ok();
    log.few_p0 = (0..n).all(|i| (lists[i].iter().filter(|c| in_p0(c)).count() as f64) <= small);

    // (III) X \ I into Y \ P₀, grown from an A-matching into P \ P₀
    let rest: Vec<usize> = (0..n).filter(|i| big_i.binary_search(i).is_err()).collect();
    let a_len = n.saturating_sub(libm::ceil(theta * d) as usize);
    let a: Vec<usize> = (0..n).filter(|&i| !in_s(i)).take(a_len).collect();
    log.a_size = a.len();
    let m0 = match match_members(ctx, lists, &a, |c| regime.is_popular(c) && !in_p0(&c), None) {
        Ok(m) => {
            log.m0_perfect = true;
            m
        }
        Err(_) => {
            // keep the maximum partial matching as the starting point
            let adj: Vec<Vec<usize>> = a
                .iter()
                .map(|&i| lists[i].iter().copied().filter(|c| regime.is_popular(*c) && !in_p0(c)).collect())
                .collect();
            let b = Bigraph::new(ctx.gamma_size, adj).expect("colors lie in the palette");
            b.max_matching().pairs().map(|(u, c)| (a[u], c)).collect()
        }
    };
    let m_rest = match match_members(ctx, lists, &rest, |c| !in_p0(&c), Some(&m0)) {
        Ok(m) => m,
        Err(e) => {
            log.failed_stage = Some(3);
            return (Err(e), log);
        }
    };
    let mut u0: Vec<Color> = m_rest.iter().map(|x| x.1).filter(|c| !popular(c)).collect();
    u0.sort_unstable();
    log.u0_size = u0.len();
    log.u0_small = u0.len() as f64 <= theta * d;

    // (IV) I₁ into U \ U₀
    let m_i1 = match match_members(ctx, lists, &i1, |c| !regime.is_popular(c) && u0.binary_search(&c).is_err(), None) {
        Ok(m) => m,
        Err(e) => {
            log.failed_stage = Some(4);
            return (Err(e), log);
        }
    };
    let mut all = m_i0;
    all.extend(m_rest);
    all.extend(m_i1);
    (Ok(all), log)
}
