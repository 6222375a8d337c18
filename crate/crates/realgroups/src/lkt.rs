//! Lowest K-types by two independent routes. The wall-crossing route runs
//! the inductive algorithm (deform the continuous parameter to the walls,
//! straighten complex descents by cross actions, and descend through real
//! roots by inverse Cayley transforms), tracking the KGB elements directly.
//! The restriction route transports final characters of the terminal
//! parameter back along the same trail and takes the fiber over the input
//! character. The two answers are compared exactly.

use crate::atlasparams::AtlasParameter;
use crate::chartorus;
use crate::kgb::KgbElt;
use crate::lattice::*;
use crate::lparams::{LCtx, LError, LParameter, TrailStep};
use crate::rootdata::{restricted_system, RootType};
use num::Zero;

/// The record of one run of the wall-crossing algorithm.
#[derive(Clone, Debug)]
pub struct LktRun {
    /// the terminal (tempiric) parameter
    pub phi_final: LParameter,
    /// cross and Cayley steps applied, in order (deformation steps act
    /// trivially on fiber characters and are not recorded)
    pub trail: Vec<TrailStep>,
    /// the KGB elements produced by tracking the input element through the
    /// steps (the wall-crossing route's answer)
    pub xs: Vec<KgbElt>,
}

/// The outcome of the two-route lowest-K-type computation.
#[derive(Clone, Debug)]
pub struct LktResult {
    /// tempiric parameters of the lowest K-types (one per KGB element)
    pub entries: Vec<AtlasParameter>,
    /// KGB elements from the wall-crossing route
    pub wall_xs: Vec<KgbElt>,
    /// KGB elements from the restriction route
    pub res_xs: Vec<KgbElt>,
    /// the terminal parameter
    pub phi_final: LParameter,
    pub trail: Vec<TrailStep>,
}

impl LktResult {
    /// Do the two routes agree exactly?
    pub fn paths_agree(&self) -> bool {
        self.wall_xs == self.res_xs
    }
}

/// Deform the continuous part of a parameter along a `theta_y`-fixed
/// direction (an exact operation leaving the fiber and the discrete data
/// unchanged).
fn deform_phi(lctx: &LCtx, phi: &LParameter, delta: &[Q]) -> Result<LParameter, LError> {
    let half = qr(1, 2);
    let lambda: Vec<Q> = phi.lambda.iter().zip(delta).map(|(a, b)| a - b).collect();
    let shift: Vec<Q> = delta.iter().map(|v| -v * &half).collect();
    let y = lctx.dual_tits.mul(&lctx.dual_tits.e(CochVec::new(shift)), &phi.y);
    let out = LParameter { lambda, y };
    lctx.validate(&out)?;
    Ok(out)
}

/// Remove the part of `nu` orthogonal to every restricted coroot (the
/// central deformation), returning the adjusted parameter.
fn deform_central_phi(lctx: &LCtx, phi: &LParameter) -> Result<LParameter, LError> {
    let tau = lctx.group_involution(phi);
    let rs = restricted_system(lctx.group_datum(), &tau);
    let nu = lctx.nu(phi);
    let mut nu_r = vec![Q::zero(); nu.len()];
    for j in 0..rs.simples.len() {
        let omega = crate::atlasparams::restricted_fundamental_weight(&rs, j);
        let c = CharVec::new(nu.clone()).pair(&rs.restricted[rs.simples[j]].coroot);
        for (a, b) in nu_r.iter_mut().zip(&omega) {
            *a += b * &c;
        }
    }
    let delta: Vec<Q> = nu.iter().zip(&nu_r).map(|(a, b)| a - b).collect();
    if delta.iter().all(|v| v.is_zero()) {
        return Ok(phi.clone());
    }
    deform_phi(lctx, phi, &delta)
}

/// Run the wall-crossing algorithm on a complete parameter `(phi, u)` with
/// `phi` standard and `u` final. Returns the terminal tempiric parameter,
/// the trail of cross/Cayley steps, and the tracked KGB elements.
pub fn lkt_algorithm(lctx: &LCtx, phi: &LParameter, u: &[Z]) -> Result<LktRun, LError> {
    lkt_algorithm_ordered(lctx, phi, u, None)
}

/// As [`lkt_algorithm`], but with an explicit scan order for the choice of
/// restricted simple root in the wall-deformation step. `beta_order` is a
/// permutation of `0..n` for some `n`; positions beyond the number of
/// restricted simples in a given fiber are skipped. The terminal entries are
/// independent of this choice.
pub fn lkt_algorithm_ordered(
    lctx: &LCtx,
    phi: &LParameter,
    u: &[Z],
    beta_order: Option<&[usize]>,
) -> Result<LktRun, LError> {
    lctx.validate(phi)?;
    if !lctx.is_standard(phi)? {
        return Err(LError::Invalid("wall-crossing route needs a standard parameter".into()));
    }
    if !lctx.final_subgroup(phi)?.contains(&u.to_vec()) {
        return Err(LError::Invalid("character is not final for this parameter".into()));
    }
    let kgb = lctx.kgb;
    let gd = kgb.datum();
    let all = kgb.enumerate();
    let mut cur = phi.clone();
    let mut xs = vec![lctx.e_phi(phi, u)?];
    let mut trail: Vec<TrailStep> = Vec::new();
    // generous bound: restricted-simple count per fiber plus Weyl-order
    // many cross/Cayley steps
    let weyl_order = crate::tits::enumerate_weyl(gd).len();
    let max_steps = 4 * weyl_order + 4 * gd.rank + 16;
    let mut steps = 0usize;
    loop {
        steps += 1;
        assert!(steps <= max_steps, "wall-crossing algorithm failed to terminate");
        // (0) central deformation
        cur = deform_central_phi(lctx, &cur)?;
        // (1) stop when tempiric
        if lctx.is_tempiric(&cur) {
            break;
        }
        // (2) deform to the wall of the first restricted simple root with a
        // nonzero continuous pairing, in the chamber containing nu (so the
        // straight path to the wall crosses no other wall)
        let tau = lctx.group_involution(&cur);
        let nu = lctx.nu(&cur);
        let rs =
            crate::rootdata::restricted_system_toward(gd, &tau, &CharVec::new(nu.clone()));
        let scan: Vec<usize> = match beta_order {
            Some(ord) => ord.iter().copied().filter(|&j| j < rs.simples.len()).collect(),
            None => (0..rs.simples.len()).collect(),
        };
        let j = scan
            .into_iter()
            .find(|&j| {
                !CharVec::new(nu.clone()).pair(&rs.restricted[rs.simples[j]].coroot).is_zero()
            })
            .expect("non-tempiric parameter has a wall to deform to");
        let omega = crate::atlasparams::restricted_fundamental_weight(&rs, j);
        let c = CharVec::new(nu).pair(&rs.restricted[rs.simples[j]].coroot);
        let delta: Vec<Q> = omega.iter().map(|v| v * &c).collect();
        cur = deform_phi(lctx, &cur, &delta)?;
        // restore weak integral dominance (the deformation can leave the
        // standard-form chamber; integral cross actions are equivalences)
        loop {
            let simples = lctx.integral_simples(&cur);
            let neg =
                simples.iter().copied().find(|&g| lctx.pairing(&cur, g) < Q::zero());
            let Some(g) = neg else { break };
            cur = lctx.cross(&cur, g);
            let w = crate::tits::reduced_word(gd, &gd.reflection_cochar(g));
            xs = xs.iter().map(|x| kgb.cross_word(&w.word, x)).collect();
            xs.sort();
            xs.dedup();
            trail.push(TrailStep::Cross { group_root: g });
        }
        // (3) cross actions through singular integral-simple complex descents
        loop {
            let tau = lctx.group_involution(&cur);
            let ca = tau.char_action();
            let simples = lctx.integral_simples(&cur);
            let desc = simples.iter().copied().find(|&g| {
                lctx.is_singular(&cur, g)
                    && tau.classify_root(gd, g) == RootType::Complex
                    && {
                        let img = ca.apply_z(&gd.roots[g].vec);
                        gd.root_index(&img).map(|i| !gd.roots[i].is_positive()).unwrap_or(false)
                    }
            });
            let Some(g) = desc else { break };
            cur = lctx.cross(&cur, g);
            let w = crate::tits::reduced_word(gd, &gd.reflection_cochar(g));
            xs = xs.iter().map(|x| kgb.cross_word(&w.word, x)).collect();
            xs.sort();
            xs.dedup();
            trail.push(TrailStep::Cross { group_root: g });
        }
        // (4) inverse Cayley through a singular integral-simple root whose
        // dual root is noncompact imaginary
        let simples = lctx.integral_simples(&cur);
        let dd = lctx.dual_datum();
        let cand = simples.iter().copied().find(|&g| {
            lctx.is_singular(&cur, g) && {
                let a = crate::lparams::dual_root_of_group(gd, dd, g);
                matches!(lctx.grading(&cur.y, a), Ok(false))
            }
        });
        let Some(g) = cand else {
            continue; // nothing to descend through; re-test tempiric
        };
        cur = lctx.cayley(&cur, g)?;
        let mut next = Vec::new();
        for x in &xs {
            next.extend(kgb.cayley_down(g, x, &all)?);
        }
        next.sort();
        next.dedup();
        xs = next;
        trail.push(TrailStep::Cayley { group_root: g });
    }
    // the terminal parameter is well-defined only up to the cross action of
    // Weyl elements keeping it in standard form; pick the minimal standard
    // representative so the answer is independent of the route taken
    let mut best: Option<(Vec<Q>, Vec<usize>, Vec<Q>, Vec<KgbElt>, crate::tits::WeylElt)> = None;
    let ti_cur = lctx.group_ti(&cur)?;
    let base_cur = kgb.basepoint_of(ti_cur);
    for w in crate::tits::enumerate_weyl(gd) {
        let cand = lctx.cross_weyl(&cur, &w);
        if lctx.is_standard(&cand) != Ok(true) {
            continue;
        }
        // only conjugations aligning the fiber basepoints preserve the
        // character bookkeeping (no rho-shift on the torsor coordinates)
        let tb = kgb.cross_word(&w.word, &base_cur);
        if tb != kgb.basepoint_of(tb.ti) {
            continue;
        }
        let mut txs: Vec<KgbElt> = xs.iter().map(|x| kgb.cross_word(&w.word, x)).collect();
        txs.sort();
        let key = (cand.lambda.clone(), cand.y.w.word.clone(), cand.y.t.entries().to_vec(), txs);
        if best.as_ref().map_or(true, |b| (&b.0, &b.1, &b.2, &b.3) > (&key.0, &key.1, &key.2, &key.3))
        {
            best = Some((key.0, key.1, key.2, key.3, w));
        }
    }
    if let Some((_, _, _, _, w)) = best {
        if !w.word.is_empty() {
            for &i in w.word.iter().rev() {
                let g = gd.simple_index(i);
                cur = lctx.cross(&cur, g);
                xs = xs.iter().map(|x| kgb.cross(i, x)).collect();
                trail.push(TrailStep::Cross { group_root: g });
            }
            xs.sort();
            xs.dedup();
        }
    }
    // keep only elements whose terminal fiber character is final: inverse
    // Cayley transforms can produce non-final characters, and lowest
    // K-types are complete (final) parameters
    let finals = lctx.final_subgroup(&cur)?;
    xs.retain(|x| finals.contains(&chartorus::d_tau(kgb, x)));
    xs.sort();
    xs.dedup();
    Ok(LktRun { phi_final: cur, trail, xs })
}

/// The restriction map realized on fiber characters: transport every final
/// character of the terminal parameter back along the trail. Returns the
/// pairs `(u_final, transported)`.
pub fn res_map(lctx: &LCtx, run: &LktRun) -> Result<Vec<(Vec<Z>, Vec<Z>)>, LError> {
    let ti_final = lctx.group_ti(&run.phi_final)?;
    let mut out = Vec::new();
    for uf in lctx.final_subgroup(&run.phi_final)? {
        match lctx.transport_trail_back(&run.trail, ti_final, &uf) {
            Ok((_, back)) => out.push((uf, back)),
            // characters outside the kernel of a Cayley root correspond to
            // compact elements the transform never reaches; the restriction
            // is not defined there
            Err(LError::Kgb(crate::kgb::KgbError::WrongRootType(_))) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Is the induced map on component-group characters injective (equivalently,
/// is the transported restriction map surjective onto the final characters
/// of the original parameter)?
pub fn iota_injective(lctx: &LCtx, phi: &LParameter, run: &LktRun) -> Result<bool, LError> {
    let finals = lctx.final_subgroup(phi)?;
    let mut image: Vec<Vec<Z>> = res_map(lctx, run)?.into_iter().map(|(_, b)| b).collect();
    image.sort();
    image.dedup();
    Ok(finals.iter().all(|f| image.contains(f)))
}

/// Compute the lowest K-types of the complete parameter `(phi, u)` by both
/// routes and compare them.
pub fn lkt(lctx: &LCtx, phi: &LParameter, u: &[Z]) -> Result<LktResult, LError> {
    lkt_ordered(lctx, phi, u, None)
}

/// As [`lkt`], but with an explicit scan order for the wall-deformation step
/// (see [`lkt_algorithm_ordered`]).
pub fn lkt_ordered(
    lctx: &LCtx,
    phi: &LParameter,
    u: &[Z],
    beta_order: Option<&[usize]>,
) -> Result<LktResult, LError> {
    let run = lkt_algorithm_ordered(lctx, phi, u, beta_order)?;
    // restriction route: fiber of the transported restriction map over `u`
    let mut res_xs = Vec::new();
    for (uf, back) in res_map(lctx, &run)? {
        if back == u {
            res_xs.push(lctx.e_phi(&run.phi_final, &uf)?);
        }
    }
    res_xs.sort();
    res_xs.dedup();
    let entries = run
        .xs
        .iter()
        .map(|x| AtlasParameter {
            x: x.clone(),
            d_lambda: run.phi_final.lambda.clone(),
            kappa: crate::atlasparams::kappa_of(lctx, &run.phi_final),
            phi: run.phi_final.clone(),
        })
        .collect();
    Ok(LktResult {
        entries,
        wall_xs: run.xs.clone(),
        res_xs,
        phi_final: run.phi_final.clone(),
        trail: run.trail,
    })
}

/// The tempiric packet of a tempiric parameter: the parameters of all its
/// final characters.
pub fn tempiric_packet(lctx: &LCtx, phi: &LParameter) -> Result<Vec<AtlasParameter>, LError> {
    if !lctx.is_tempiric(phi) {
        return Err(LError::Invalid("packet needs a tempiric parameter".into()));
    }
    let mut out = Vec::new();
    for u in lctx.final_subgroup(phi)? {
        out.push(AtlasParameter::from_complete(lctx, phi, &u)?);
    }
    out.sort_by(|a, b| a.x.cmp(&b.x));
    Ok(out)
}

/// Largeness of a KGB element: every simple imaginary root is noncompact.
pub fn largeness_check(
    kgb: &crate::kgb::KgbContext,
    x: &KgbElt,
) -> Result<bool, crate::kgb::KgbError> {
    let tau = kgb.involution(x);
    for i in tau.simple_imaginary(kgb.datum()) {
        if kgb.is_compact(x, i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// D-map on the fiber: the coordinates of every element of the terminal
/// fiber, for diagnostics.
pub fn fiber_coordinates(kgb: &crate::kgb::KgbContext, ti: usize) -> Vec<(KgbElt, Vec<Z>)> {
    let all = kgb.enumerate();
    kgb.fiber_of(&all, ti)
        .into_iter()
        .map(|x| {
            let u = chartorus::d_tau(kgb, &x);
            (x, u)
        })
        .collect()
}

#[cfg(test)]
mod unit {
    use super::*;
    use crate::kgb::KgbContext;
    use crate::rootdata::{build_datum, InnerClass, InnerClassSpec, Isogeny};
    use crate::tits::{TitsElement, WeylElt};

    fn sl2() -> (InnerClass, InnerClass) {
        let d = build_datum("A1", Isogeny::SimplyConnected).unwrap();
        let ic = InnerClass::from_spec(d, &InnerClassSpec::Compact).unwrap();
        let dual = ic.dual();
        (ic, dual)
    }

    #[test]
    fn spherical_principal_series_has_one_lkt() {
        // the spherical principal series of the rank-one split form:
        // deforming the continuous parameter to zero gives the (still
        // irreducible) spherical tempered principal series, with its single
        // lowest K-type over the split Cartan
        let (ic, dual) = sl2();
        let kgb = KgbContext::new(&ic).unwrap();
        let lctx = LCtx::new(&kgb, &dual);
        let phi = lctx.fundamental_parameter();
        let f = lctx.final_subgroup(&phi).unwrap();
        assert_eq!(f.len(), 1);
        let r = lkt(&lctx, &phi, &f[0]).unwrap();
        assert!(r.paths_agree(), "wall route {:?} vs res route {:?}", r.wall_xs, r.res_xs);
        assert!(lctx.is_tempiric(&r.phi_final));
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].x, kgb.basepoint_of(r.entries[0].x.ti));
        assert!(largeness_check(&kgb, &r.entries[0].x).unwrap());
    }

    #[test]
    fn nonspherical_principal_series_has_two_lkts() {
        // the nonspherical principal series: same lambda, but y carries the
        // other order-two character of the split torus. Deforming to the
        // wall gives the reducible tempered principal series, which
        // descends through one Cayley transform to the two limit-of-
        // discrete-series K-types; the character-group map embeds the
        // trivial group into Z/2
        let (ic, dual) = sl2();
        let kgb = KgbContext::new(&ic).unwrap();
        let lctx = LCtx::new(&kgb, &dual);
        let n = 1;
        let lambda = vec![Q::from_integer(Z::from(1))];
        let y = TitsElement { t: CochVec::zero(n), w: WeylElt::identity(n), flag: true };
        let phi = LParameter { lambda, y };
        assert_eq!(lctx.validate(&phi), Ok(()));
        assert_eq!(lctx.is_standard(&phi), Ok(true));
        let f = lctx.final_subgroup(&phi).unwrap();
        assert_eq!(f.len(), 1);
        let r = lkt(&lctx, &phi, &f[0]).unwrap();
        assert!(r.paths_agree(), "wall route {:?} vs res route {:?}", r.wall_xs, r.res_xs);
        assert_eq!(r.entries.len(), 2);
        let alpha = kgb.datum().simple_index(0);
        for e in &r.entries {
            assert!(!kgb.is_compact(&e.x, alpha).unwrap());
            assert!(largeness_check(&kgb, &e.x).unwrap());
        }
        // component groups: trivial for the input, Z/2 at the terminal
        // parameter, with the transported restriction surjective
        let run = lkt_algorithm(&lctx, &phi, &f[0]).unwrap();
        assert_eq!(lctx.final_subgroup(&run.phi_final).unwrap().len(), 2);
        assert!(iota_injective(&lctx, &phi, &run).unwrap());
    }

    #[test]
    fn discrete_series_lkt_is_itself() {
        // a parameter already tempiric: the algorithm stops immediately
        let (ic, dual) = sl2();
        let kgb = KgbContext::new(&ic).unwrap();
        let lctx = LCtx::new(&kgb, &dual);
        // discrete-series-type parameter at infinitesimal character rho:
        // lambda = rho, dual-side involution -1 (Weyl part the reflection)
        let lambda = vec![Q::from_integer(Z::from(1))];
        let sigma = lctx.dual_tits.sigma_simple(0);
        let y = lctx.dual_tits.mul(&sigma, &lctx.dual_tits.xi());
        let phi = LParameter { lambda, y };
        assert_eq!(lctx.validate(&phi), Ok(()));
        assert!(lctx.is_tempiric(&phi));
        let f = lctx.final_subgroup(&phi).unwrap();
        for u in &f {
            let r = lkt(&lctx, &phi, u).unwrap();
            assert!(r.paths_agree());
            assert_eq!(r.entries.len(), 1);
            assert_eq!(lctx.e_phi(&phi, u).unwrap(), r.entries[0].x);
        }
        let packet = tempiric_packet(&lctx, &phi).unwrap();
        assert_eq!(packet.len(), f.len());
        let _ = WeylElt::identity(1);
    }
}
