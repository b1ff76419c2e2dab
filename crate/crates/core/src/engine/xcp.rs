//! `X_{C_p}` and `X_{R_p}` at the `S_p` level.
//!
//! Upper end: `‖x‖_{S_p(C_p)}`, which dominates every level.
//!
//! Lower end: the base quotient norm `S_p(R_p +_p C_p)`, and chains of
//! families. Applying the complete contraction `x ↦ θ ∑_j e_{j1} ⊗ E_j x`
//! `d` times (the same family to every column entry at each step) maps `x`
//! into `C_p(…C_p(X_{n-d}))`, which is a single column space indexed by the
//! final groups ("leaves") of indices. Its norm over `X_0 = R_p +_p C_p` is
//!
//! ```text
//! inf_{y + z = x} ( ∑_leaf ‖[y_i]_{i ∈ leaf}‖_p^p + ‖[z_i]_i‖_p^p )^{1/p}
//! ```
//!
//! so `θ^d` times a certified lower bound of that quotient bounds `‖x‖_n`
//! from below for every `n ≥ d`. Refining a leaf never decreases the quotient
//! for `p ≤ 2`, so at each step only families with the largest admissible
//! number of blocks are tried.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;


use super::{check_support, stabilization_index, EngineOutput, RecursionTrace, SpaceSpec, TraceLevel, Variant};
use crate::allowable::{partitions_with_blocks, AllowableFamily, Budget};
use crate::bound::{NormBound, Witness};
use crate::error::{Error, Result};
use crate::matrix::{CMatrix, Exponent};
use crate::schatten::{schatten_norm, sp_cp_norm};
use crate::sum_spaces::{grouped_plus_cp_norm, rp_plus_cp_norm, SolverOptions};
use crate::vector::OpVector;
#[allow(unused_imports)]
use num_traits::Float;

/// States visited by the chain search before it stops expanding.
const MAX_STATES: usize = 20_000;
/// Chain quotients solved before the search stops evaluating.
const MAX_EVALS: usize = 2_000;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct State {
    kept: usize,
    leaves: Vec<usize>,
}

struct Node {
    state: State,
    depth: usize,
    parent: Option<usize>,
    family: Option<AllowableFamily>,
}

/// Certified interval for the `X_{C_p}` (or, through adjoints, `X_{R_p}`) norm
/// at the `S_p` level, with the level trace `n = 0, …, min(chain_depth, max_depth)`.
pub fn xcp_norm_bounds(x: &OpVector, spec: &SpaceSpec) -> Result<EngineOutput> {
    spec.validate()?;
    let x = match spec.variant {
        Variant::XCp => x.clone(),
        Variant::XRp => x.adjoint(),
        other => {
            return Err(Error::Precondition(format!(
                "the X_Cp engine does not handle {other}"
            )))
        }
    };
    check_support(&x, spec)?;
    let p = Exponent::Finite(spec.p);
    if x.is_zero() {
        let level = TraceLevel {
            n: 0,
            bound: NormBound::exact(0.0, Witness::ClosedForm),
            family: None,
            binding: false,
        };
        return Ok(EngineOutput {
            bound: NormBound::exact(0.0, Witness::ClosedForm),
            trace: RecursionTrace {
                levels: alloc::vec![level],
                stabilized_at: Some(0),
            },
        });
    }
    let (x, _) = x.canonical_phases();
    let xs = x.matrices();
    let idx = x.support();

    let base = rp_plus_cp_norm(&xs, p, &spec.solver)?;
    let upper = sp_cp_norm(&xs, p)?.max(base.upper);
    let depth = spec.chain_depth.min(spec.max_depth);
    // Chains never exceed the norm, so a closed base interval leaves nothing to search.
    let closed = base.lower >= upper - spec.tol;
    let depth = if closed { 0 } else { depth };

    let nodes = expand(&idx, &spec.budget, depth);
    let chain_opts = SolverOptions {
        max_iterations: spec.solver.max_iterations.min(800),
        tolerance: spec.solver.tolerance.max(1e-8),
        ..spec.solver.clone()
    };
    let best = evaluate(&nodes, &xs, p, spec.theta, base.lower, depth, &chain_opts)?;

    // Lower end of level n: the best chain of depth at most n.
    let mut lows = alloc::vec![base.lower];
    let mut highs = alloc::vec![base.upper];
    let mut fams: Vec<Option<AllowableFamily>> = alloc::vec![None];
    let mut running: (f64, Option<usize>) = (base.lower, None);
    for d in 1..=depth {
        if let Some((v, id)) = best[d] {
            if v > running.0 {
                running = (v, Some(id));
            }
        }
        lows.push(running.0);
        highs.push(upper);
        fams.push(running.1.and_then(|id| first_family(&nodes, id)));
    }
    let levels: Vec<TraceLevel> = (0..lows.len())
        .map(|n| TraceLevel {
            n,
            bound: NormBound::new(lows[n], highs[n], Witness::ClosedForm),
            family: fams[n].clone(),
            binding: n > 0 && lows[n] > base.lower + spec.tol,
        })
        .collect();
    let stable = stabilization_index(&lows, &highs, spec.tol);
    let stabilized_at = (closed || stable + 1 < lows.len()).then_some(stable);

    let lower = *lows.last().expect("level 0");
    let witness = match running.1 {
        Some(id) => chain_witness(&nodes, id, &idx),
        None => base.witness,
    };
    Ok(EngineOutput {
        bound: NormBound::new(lower, upper, witness),
        trace: RecursionTrace { levels, stabilized_at },
    })
}

/// Breadth-first enumeration of chain states up to `depth` families.
fn expand(idx: &[usize], budget: &Budget, depth: usize) -> Vec<Node> {
    let n = idx.len();
    let full = (1usize << n) - 1;
    let root = State {
        kept: full,
        leaves: alloc::vec![full],
    };
    let mut nodes = alloc::vec![Node {
        state: root.clone(),
        depth: 0,
        parent: None,
        family: None,
    }];
    let mut seen: BTreeMap<State, usize> = BTreeMap::new();
    seen.insert(root, 0);
    let mut partitions: BTreeMap<(usize, usize), Vec<Vec<usize>>> = BTreeMap::new();
    let mut frontier = alloc::vec![0usize];
    for d in 1..=depth {
        let mut next = Vec::new();
        for &id in &frontier {
            let kept = nodes[id].state.kept;
            for j in (0..n).filter(|&j| kept >> j & 1 == 1) {
                let tail = kept & !((1usize << j) - 1);
                let elems: Vec<usize> = (0..n).filter(|&i| tail >> i & 1 == 1).collect();
                let m = elems.len();
                let blocks = budget.cap(idx[j], m);
                let rgs_list = partitions.entry((m, blocks)).or_insert_with(|| partitions_with_blocks(m, blocks));
                for rgs in rgs_list.iter() {
                    let mut masks = alloc::vec![0usize; blocks];
                    for (&b, &e) in rgs.iter().zip(&elems) {
                        masks[b] |= 1 << e;
                    }
                    let mut leaves: Vec<usize> = nodes[id]
                        .state
                        .leaves
                        .iter()
                        .flat_map(|&leaf| masks.iter().map(move |&b| leaf & b))
                        .filter(|&l| l != 0)
                        .collect();
                    leaves.sort_unstable();
                    let state = State { kept: tail, leaves };
                    if seen.contains_key(&state) {
                        continue;
                    }
                    let k = (1..=idx[j]).find(|&k| budget.allows(k, blocks)).unwrap_or(idx[j]);
                    let sets = masks
                        .iter()
                        .map(|&b| (0..n).filter(|&i| b >> i & 1 == 1).map(|i| idx[i]).collect())
                        .collect();
                    seen.insert(state.clone(), nodes.len());
                    next.push(nodes.len());
                    nodes.push(Node {
                        state,
                        depth: d,
                        parent: Some(id),
                        family: Some(AllowableFamily::new(k, sets)),
                    });
                    if nodes.len() >= MAX_STATES {
                        return nodes;
                    }
                }
            }
        }
        frontier = next;
    }
    nodes
}

/// Best certified chain value at each depth, as `(value, node id)`.
fn evaluate(
    nodes: &[Node],
    xs: &[CMatrix],
    p: Exponent,
    theta: f64,
    base_lower: f64,
    depth: usize,
    opts: &SolverOptions,
) -> Result<Vec<Option<(f64, usize)>>> {
    let n = xs.len();
    let pick = |mask: usize| -> Vec<usize> { (0..n).filter(|&i| mask >> i & 1 == 1).collect() };
    // Cheap upper estimates: z = 0 or y = 0 in the chain quotient.
    let mut order: Vec<(f64, usize)> = Vec::new();
    for (id, node) in nodes.iter().enumerate().skip(1) {
        let kept: Vec<CMatrix> = pick(node.state.kept).into_iter().map(|i| xs[i].clone()).collect();
        let col = sp_cp_norm(&kept, p)?;
        let row = p.lp_combine(node.state.leaves.iter().map(|&leaf| {
            let blocks: Vec<CMatrix> = pick(leaf).into_iter().map(|i| xs[i].clone()).collect();
            schatten_norm(&CMatrix::hstack(&blocks).expect("common shape"), p)
        }));
        order.push((theta.powi(node.depth as i32) * col.min(row), id));
    }
    order.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(core::cmp::Ordering::Equal).then(a.1.cmp(&b.1)));

    let mut best: Vec<Option<(f64, usize)>> = alloc::vec![None; depth + 1];
    let mut evals = 0;
    for (ub, id) in order {
        let node = &nodes[id];
        let d = node.depth;
        let so_far = best[..=d]
            .iter()
            .flatten()
            .map(|b| b.0)
            .fold(base_lower, f64::max);
        if ub <= so_far {
            continue;
        }
        if evals >= MAX_EVALS {
            break;
        }
        evals += 1;
        let kept_pos = pick(node.state.kept);
        let local: BTreeMap<usize, usize> = kept_pos.iter().enumerate().map(|(l, &g)| (g, l)).collect();
        let kept: Vec<CMatrix> = kept_pos.iter().map(|&i| xs[i].clone()).collect();
        let groups: Vec<Vec<usize>> = node
            .state
            .leaves
            .iter()
            .map(|&leaf| pick(leaf).into_iter().map(|g| local[&g]).collect())
            .collect();
        let singletons = groups.iter().all(|g| g.len() == 1);
        // With singleton leaves and p = 1 the quotient is exactly the column norm.
        let quotient = if singletons && p == Exponent::Finite(1.0) {
            sp_cp_norm(&kept, p)?
        } else {
            grouped_plus_cp_norm(&kept, &groups, p, opts)?.lower
        };
        let value = theta.powi(d as i32) * quotient;
        if best[d].is_none_or(|b| value > b.0) {
            best[d] = Some((value, id));
        }
    }
    Ok(best)
}

fn chain_path(nodes: &[Node], id: usize) -> Vec<usize> {
    let mut path = Vec::new();
    let mut cur = Some(id);
    while let Some(c) = cur {
        if nodes[c].family.is_some() {
            path.push(c);
        }
        cur = nodes[c].parent;
    }
    path.reverse();
    path
}

fn first_family(nodes: &[Node], id: usize) -> Option<AllowableFamily> {
    chain_path(nodes, id).first().and_then(|&c| nodes[c].family.clone())
}

fn chain_witness(nodes: &[Node], id: usize, idx: &[usize]) -> Witness {
    let families = chain_path(nodes, id)
        .into_iter()
        .filter_map(|c| nodes[c].family.clone())
        .collect();
    let leaves = nodes[id]
        .state
        .leaves
        .iter()
        .map(|&leaf| (0..idx.len()).filter(|&i| leaf >> i & 1 == 1).map(|i| idx[i]).collect())
        .collect();
    Witness::Chain { families, leaves }
}
