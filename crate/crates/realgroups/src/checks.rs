//! Self-contained invariant checks, shared by the command-line self-test and
//! the integration test suite. Every check returns `Ok(())` or a message
//! describing the first violation found.

use num::Zero;

use crate::chartorus;
use crate::kgb::{KgbContext, KgbElt};
use crate::lattice::{Q, Z};
use crate::lkt;
use crate::lparams::{LCtx, LParameter};
use crate::rootdata::RootType;
use crate::sampling::{complete_parameter_grid, parameter_grid, CorpusEntry};

/// Every twisted-involution fiber is a torsor under its character group:
/// matching orders, bijective coordinates, basepoint at the origin.
pub fn check_fiber_torsor(kgb: &KgbContext) -> Result<(), String> {
    let all = kgb.enumerate();
    for ti in 0..kgb.tw_invs.len() {
        let fiber = kgb.fiber_of(&all, ti);
        let group = kgb.fiber_group(ti);
        if group.order() != num::BigInt::from(fiber.len()) {
            return Err(format!(
                "fiber {ti}: group order {} but {} elements",
                group.order(),
                fiber.len()
            ));
        }
        let mut coords: Vec<Vec<Z>> = fiber.iter().map(|x| chartorus::d_tau(kgb, x)).collect();
        coords.sort();
        coords.dedup();
        if coords.len() != fiber.len() {
            return Err(format!("fiber {ti}: coordinates not injective"));
        }
        let b = kgb.basepoint_of(ti);
        if chartorus::d_tau(kgb, &b).iter().any(|v| !v.is_zero()) {
            return Err(format!("fiber {ti}: basepoint has nonzero coordinates"));
        }
        for x in &fiber {
            let u = chartorus::d_tau(kgb, x);
            if &chartorus::d_tau_inv(kgb, ti, &u) != x {
                return Err(format!("fiber {ti}: coordinate round trip failed"));
            }
        }
    }
    Ok(())
}

/// Basepoints are coherent across fibers: a Cayley transform through a
/// noncompact imaginary simple root sends the basepoint to the basepoint,
/// and a cross action through a complex simple root does too.
pub fn check_basepoint_coherence(kgb: &KgbContext) -> Result<(), String> {
    let gd = kgb.datum();
    for ti in 0..kgb.tw_invs.len() {
        let b = kgb.basepoint_of(ti);
        let tau = kgb.involution(&b);
        for k in 0..gd.ss_rank {
            let root = gd.simple_index(k);
            match tau.classify_root(gd, root) {
                RootType::Complex => {
                    let image = kgb.cross(k, &b);
                    let target = kgb.basepoint_of(image.ti);
                    if image != target {
                        return Err(format!(
                            "fiber {ti}, simple {k}: cross action moves basepoint off basepoint"
                        ));
                    }
                }
                RootType::Imaginary => {
                    let compact = kgb
                        .is_compact(&b, root)
                        .map_err(|e| format!("fiber {ti}, simple {k}: {e:?}"))?;
                    if compact {
                        continue;
                    }
                    let image = kgb
                        .cayley_up_simple(k, &b)
                        .map_err(|e| format!("fiber {ti}, simple {k}: {e:?}"))?;
                    let target = kgb.basepoint_of(image.ti);
                    if image != target {
                        return Err(format!(
                            "fiber {ti}, simple {k}: Cayley moves basepoint off basepoint"
                        ));
                    }
                }
                RootType::Real => {}
            }
        }
    }
    Ok(())
}

/// The character-level Cayley transport agrees with the element-level Cayley
/// transform on the noncompact locus, and its kernel is generated by the
/// image of half the coroot.
pub fn check_cayley_transport(kgb: &KgbContext) -> Result<(), String> {
    let gd = kgb.datum();
    let all = kgb.enumerate();
    for ti in 0..kgb.tw_invs.len() {
        let fiber = kgb.fiber_of(&all, ti);
        let tau = kgb.involution(&kgb.basepoint_of(ti));
        for k in 0..gd.ss_rank {
            let root = gd.simple_index(k);
            if tau.classify_root(gd, root) != RootType::Imaginary {
                continue;
            }
            let abar = chartorus::alpha_bar(kgb, ti, root).map_err(|e| format!("{e:?}"))?;
            // commuting square on the noncompact locus
            for x in &fiber {
                let compact = kgb.is_compact(x, root).map_err(|e| format!("{e:?}"))?;
                if compact {
                    continue;
                }
                let u = chartorus::d_tau(kgb, x);
                if !abar.eval(&u).is_zero() {
                    return Err(format!(
                        "fiber {ti}, root {root}: noncompact element not in character kernel"
                    ));
                }
                let (ti2, u2) =
                    chartorus::cayley_char_map(kgb, ti, root, &u).map_err(|e| format!("{e:?}"))?;
                let y = kgb.cayley_up(root, x).map_err(|e| format!("{e:?}"))?;
                if y.ti != ti2 || chartorus::d_tau(kgb, &y) != u2 {
                    return Err(format!(
                        "fiber {ti}, root {root}: character transport disagrees with Cayley"
                    ));
                }
            }
            // kernel of the transport inside the character kernel
            let v = chartorus::v_subgroup(kgb, ti, root).map_err(|e| format!("{e:?}"))?;
            let mut kernel: Vec<Vec<Z>> = Vec::new();
            for u in &v {
                let (_, u2) =
                    chartorus::cayley_char_map(kgb, ti, root, u).map_err(|e| format!("{e:?}"))?;
                if u2.iter().all(|c| c.is_zero()) {
                    kernel.push(u.clone());
                }
            }
            kernel.sort();
            let m = chartorus::m_bar(kgb, ti, root).map_err(|e| format!("{e:?}"))?;
            let mut expected = chartorus::subgroup_closure(kgb.fiber_group(ti), &[m]);
            expected.sort();
            if kernel != expected {
                return Err(format!(
                    "fiber {ti}, root {root}: transport kernel is not generated by half the coroot"
                ));
            }
        }
    }
    Ok(())
}

/// Tempiric calculus: the reduction is idempotent, a parameter is tempiric
/// exactly when its continuous part vanishes, and packet members are
/// pairwise distinct.
pub fn check_tempiric_calculus(lctx: &LCtx, params: &[LParameter]) -> Result<(), String> {
    for p in params {
        let r = lctx.tempiric_reduce(p);
        let rr = lctx.tempiric_reduce(&r);
        if r.lambda != rr.lambda
            || r.y.t.entries() != rr.y.t.entries()
            || r.y.w.word != rr.y.w.word
        {
            return Err("tempiric reduction is not idempotent".into());
        }
        let nu_zero = lctx.nu(p).iter().all(|v| v.is_zero());
        if lctx.is_tempiric(p) != nu_zero {
            return Err("tempiric test disagrees with vanishing of continuous part".into());
        }
        if lctx.is_tempiric(&r) {
            if let Ok(packet) = lkt::tempiric_packet(lctx, &r) {
                let mut xs: Vec<&KgbElt> = packet.iter().map(|e| &e.x).collect();
                let n = xs.len();
                xs.sort();
                xs.dedup();
                if xs.len() != n {
                    return Err("packet members are not pairwise distinct".into());
                }
            }
        }
    }
    Ok(())
}

/// The two lowest-K-type routes agree entry by entry on every complete
/// parameter supplied.
pub fn check_two_path(lctx: &LCtx, complete: &[(LParameter, Vec<Z>)]) -> Result<(), String> {
    for (phi, u) in complete {
        let result = lkt::lkt(lctx, phi, u).map_err(|e| format!("{e:?}"))?;
        if !result.paths_agree() {
            return Err(format!(
                "routes disagree: wall {:?} vs restriction {:?} (lambda {:?}, u {:?})",
                result.wall_xs, result.res_xs, phi.lambda, u
            ));
        }
    }
    Ok(())
}

/// The induced map on component-group characters is injective for every
/// complete parameter supplied.
pub fn check_iota_injective(lctx: &LCtx, complete: &[(LParameter, Vec<Z>)]) -> Result<(), String> {
    for (phi, u) in complete {
        let run = lkt::lkt_algorithm(lctx, phi, u).map_err(|e| format!("{e:?}"))?;
        if !lkt::iota_injective(lctx, phi, &run).map_err(|e| format!("{e:?}"))? {
            return Err(format!("induced character map not injective (lambda {:?})", phi.lambda));
        }
    }
    Ok(())
}

/// The wall-crossing route terminates within its step bound (asserted inside
/// the algorithm) and its output does not depend on the scan order used to
/// choose the wall.
pub fn check_order_invariance(
    lctx: &LCtx,
    complete: &[(LParameter, Vec<Z>)],
    cap: usize,
) -> Result<(), String> {
    let rank = lctx.group_datum().rank;
    let reversed: Vec<usize> = (0..rank).rev().collect();
    for (phi, u) in complete.iter().take(cap) {
        let a = lkt::lkt_ordered(lctx, phi, u, None).map_err(|e| format!("{e:?}"))?;
        let b = lkt::lkt_ordered(lctx, phi, u, Some(&reversed)).map_err(|e| format!("{e:?}"))?;
        let key = |r: &lkt::LktResult| {
            let mut v: Vec<(KgbElt, Vec<Q>, Vec<Q>)> = r
                .entries
                .iter()
                .map(|e| (e.x.clone(), e.d_lambda.clone(), e.kappa.clone()))
                .collect();
            v.sort();
            v
        };
        if key(&a) != key(&b) {
            return Err(format!("scan order changed the result (lambda {:?})", phi.lambda));
        }
    }
    Ok(())
}

/// Largeness: every basepoint has all simple imaginary roots noncompact, and
/// the lowest K-types of trivial-character parameters are large.
pub fn check_largeness(
    lctx: &LCtx,
    complete: &[(LParameter, Vec<Z>)],
    cap: usize,
) -> Result<(), String> {
    let kgb = lctx.kgb;
    for ti in 0..kgb.tw_invs.len() {
        let b = kgb.basepoint_of(ti);
        if !lkt::largeness_check(kgb, &b).map_err(|e| format!("{e:?}"))? {
            return Err(format!("basepoint of fiber {ti} is not large"));
        }
    }
    let mut done = 0usize;
    for (phi, u) in complete {
        if !u.iter().all(|c| c.is_zero()) {
            continue;
        }
        let result = lkt::lkt(lctx, phi, u).map_err(|e| format!("{e:?}"))?;
        for e in &result.entries {
            if !lkt::largeness_check(kgb, &e.x).map_err(|er| format!("{er:?}"))? {
                return Err(format!(
                    "trivial-character lowest K-type not large (lambda {:?})",
                    phi.lambda
                ));
            }
        }
        done += 1;
        if done >= cap {
            break;
        }
    }
    Ok(())
}

/// Run every invariant check for one corpus inner class with the documented
/// parameter grid. Returns `(invariant name, outcome)` pairs in a fixed
/// order.
pub fn run_all(
    entry: &CorpusEntry,
    coeffs: &[Q],
    t_denom: u32,
) -> Vec<(&'static str, Result<(), String>)> {
    let kgb = match KgbContext::new(&entry.ic) {
        Ok(k) => k,
        Err(e) => return vec![("construction", Err(format!("{e:?}")))],
    };
    let lctx = LCtx::new(&kgb, &entry.dual_ic);
    let grid = parameter_grid(&lctx, coeffs, t_denom);
    let complete = complete_parameter_grid(&lctx, coeffs, t_denom);
    vec![
        ("fiber-torsor", check_fiber_torsor(&kgb)),
        ("basepoint-coherence", check_basepoint_coherence(&kgb)),
        ("cayley-transport", check_cayley_transport(&kgb)),
        ("tempiric-calculus", check_tempiric_calculus(&lctx, &grid)),
        ("two-path-lkt", check_two_path(&lctx, &complete)),
        ("iota-injective", check_iota_injective(&lctx, &complete)),
        ("order-invariance", check_order_invariance(&lctx, &complete, 40)),
        ("largeness", check_largeness(&lctx, &complete, 40)),
    ]
}
