//! Langlands parameters in `(lambda, y)` form: `lambda` is a rational
//! cocharacter of the dual torus (equivalently a rational character of the
//! group-side torus) and `y` is an element of the dual extended Tits group
//! whose square is `e(lambda)`. This module provides validation, the
//! fundamental (spherical principal series) parameter, dual cross actions
//! and Cayley transforms, reduction to standard form with a recorded trail,
//! tempiric parameters and their reduction, and the component-group data
//! (final character subgroup and the embedding of complete parameters into
//! the KGB space).

use crate::chevalley::ChevalleySigns;
use crate::chartorus;
use crate::kgb::{KgbContext, KgbElt, KgbError};
use crate::lattice::*;
use crate::rootdata::{
    integral_system, BasedRootDatum, InnerClass, Involution, RootType,
};
use crate::tits::*;
use num::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LError {
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error("root has the wrong type for this operation: {0}")]
    WrongRootType(String),
    #[error("{0}")]
    Kgb(#[from] KgbError),
}

/// A Langlands parameter `(lambda, y)`. `lambda` is stored in the
/// coordinates of the group-side character lattice (= the dual cocharacter
/// lattice); `y` lives in the dual extended Tits group, in the
/// nonidentity-coset (`flag = true`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LParameter {
    pub lambda: Vec<Q>,
    pub y: TitsElement,
}

/// One step of a reduction trail, recorded by the index of the *group-side*
/// root it reflects or transforms through.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrailStep {
    /// cross action by the reflection in this root
    Cross { group_root: usize },
    /// Cayley transform through this root (dual noncompact imaginary;
    /// group-side the fiber moves from the real to the imaginary side)
    Cayley { group_root: usize },
}

/// Context tying the group-side KGB space to the dual Tits group.
pub struct LCtx<'a, 'b> {
    pub kgb: &'b KgbContext<'a>,
    pub dual_ic: &'a InnerClass,
    pub dual_tits: TitsGroup<'a>,
    pub dual_signs: ChevalleySigns,
}

/// Index of the group-side root whose coroot is the given dual root.
pub fn group_root_of_dual(group: &BasedRootDatum, dual: &BasedRootDatum, a: usize) -> usize {
    group
        .roots
        .iter()
        .position(|r| r.vec == dual.roots[a].coroot && r.coroot == dual.roots[a].vec)
        .expect("dual root corresponds to a group root")
}

/// Index of the dual root that is the coroot of the given group root.
pub fn dual_root_of_group(group: &BasedRootDatum, dual: &BasedRootDatum, g: usize) -> usize {
    dual.roots
        .iter()
        .position(|r| r.vec == group.roots[g].coroot && r.coroot == group.roots[g].vec)
        .expect("group root corresponds to a dual root")
}

/// Grading of a dual root that is imaginary for the involution of `y`:
/// `true` = compact. Defined whenever the square of `y` pairs integrally
/// with the root (in particular for integral-singular roots).
pub fn dual_grading(
    dual_ic: &InnerClass,
    signs: &ChevalleySigns,
    y: &TitsElement,
    a: usize,
) -> Result<bool, LError> {
    assert!(y.flag, "parameter element lives in the nonidentity coset");
    let d = &dual_ic.datum;
    let theta = Involution { mat: y.w.mat.mul(&dual_ic.gamma) };
    if theta.classify_root(d, a) != RootType::Imaginary {
        return Err(LError::WrongRootType("dual grading needs an imaginary root".into()));
    }
    let eps = signs.xi_sign(dual_ic, a);
    let ga = d.act_on_root(&dual_ic.gamma, a).expect("twist permutes the roots");
    let ws = signs.word_sign(d, &y.w, ga);
    let pairing = d.roots[a].char_vec().pair(&y.t);
    let doubled = &pairing * qi(2);
    if !q_is_int(&doubled) {
        return Err(LError::Invalid("dual grading undefined: non-half-integral pairing".into()));
    }
    let torus_sign = if q_is_int(&pairing) { 1 } else { -1 };
    Ok(eps * ws * torus_sign == 1)
}

impl<'a, 'b> LCtx<'a, 'b> {
    pub fn new(kgb: &'b KgbContext<'a>, dual_ic: &'a InnerClass) -> Self {
        // sanity: the dual inner class must be the dual of the group one
        let expect = kgb.ic.dual();
        assert_eq!(
            expect.gamma.entries_row_major(),
            dual_ic.gamma.entries_row_major(),
            "dual inner class mismatch"
        );
        assert_eq!(
            expect.datum.simple_roots.entries_row_major(),
            dual_ic.datum.simple_roots.entries_row_major(),
            "dual datum mismatch"
        );
        let dual_tits = TitsGroup::new(dual_ic);
        let dual_signs = ChevalleySigns::new(&dual_ic.datum);
        LCtx { kgb, dual_ic, dual_tits, dual_signs }
    }

    /// Grading of a dual root imaginary for the involution of `y`, using the
    /// cached sign tables.
    pub fn grading(&self, y: &TitsElement, a: usize) -> Result<bool, LError> {
        dual_grading(self.dual_ic, &self.dual_signs, y, a)
    }

    pub fn group_datum(&self) -> &BasedRootDatum {
        self.kgb.datum()
    }

    pub fn dual_datum(&self) -> &BasedRootDatum {
        &self.dual_ic.datum
    }

    /// The matrix of the dual-side involution `theta_y = w_y . twist` on the
    /// dual cocharacter lattice (= the group character lattice).
    pub fn theta_mat(&self, p: &LParameter) -> IntMatrix {
        p.y.w.mat.mul(&self.dual_ic.gamma)
    }

    /// The dual-side involution as an involution object on the dual datum.
    pub fn dual_involution(&self, p: &LParameter) -> Involution {
        Involution { mat: self.theta_mat(p) }
    }

    /// The group-side Cartan involution determined by the parameter:
    /// `tau = -theta_y^T` on the group cocharacter lattice.
    pub fn group_involution(&self, p: &LParameter) -> Involution {
        Involution { mat: self.theta_mat(p).transpose().neg() }
    }

    /// The group-side twisted-involution index of the parameter's fiber.
    pub fn group_ti(&self, p: &LParameter) -> Result<usize, LError> {
        self.kgb
            .ti_of_involution(&self.group_involution(p))
            .ok_or_else(|| LError::Invalid("parameter involution is not in the inner class".into()))
    }

    /// Check the defining conditions: `y` in the nonidentity coset with a
    /// twisted-involution Weyl part, `lambda - theta_y lambda` integral, and
    /// `y^2 = e(lambda)`.
    pub fn validate(&self, p: &LParameter) -> Result<(), LError> {
        if !p.y.flag {
            return Err(LError::Invalid("y must lie in the nonidentity coset".into()));
        }
        let theta = self.theta_mat(p);
        if !theta.mul(&theta).is_identity() {
            return Err(LError::Invalid("w_y is not a twisted involution".into()));
        }
        let tl = theta.apply_q(&p.lambda);
        for (a, b) in p.lambda.iter().zip(&tl) {
            if !q_is_int(&(a - b)) {
                return Err(LError::Invalid("lambda - theta_y lambda is not integral".into()));
            }
        }
        let sq = self.dual_tits.mul(&p.y, &p.y);
        if !sq.w.is_identity() || sq.flag {
            return Err(LError::Invalid("y^2 is not a torus element".into()));
        }
        let lam_mod = CochVec::new(p.lambda.clone()).mod1();
        if sq.t != lam_mod {
            return Err(LError::Invalid("y^2 != e(lambda)".into()));
        }
        Ok(())
    }

    /// The fundamental parameter `(rho, e(rho/2) xi)`: the spherical
    /// principal series with infinitesimal character `rho`.
    pub fn fundamental_parameter(&self) -> LParameter {
        let lambda = self.dual_datum().rho_check.entries().to_vec();
        let t = self.dual_datum().rho_check.scale(&qr(1, 2)).mod1();
        let y = TitsElement { t, w: WeylElt::identity(self.dual_datum().rank), flag: true };
        let p = LParameter { lambda, y };
        debug_assert_eq!(self.validate(&p), Ok(()));
        p
    }

    /// Pairing of `lambda` with the coroot of a group-side root (= with the
    /// dual root itself).
    pub fn pairing(&self, p: &LParameter, group_root: usize) -> Q {
        CharVec::new(p.lambda.clone()).pair(&self.group_datum().roots[group_root].coroot_vec())
    }

    pub fn is_singular(&self, p: &LParameter, group_root: usize) -> bool {
        self.pairing(p, group_root).is_zero()
    }

    /// The dominant representative of the Weyl orbit of `lambda` (the
    /// infinitesimal character of the parameter).
    pub fn infinitesimal_character(&self, p: &LParameter) -> Vec<Q> {
        self.group_datum()
            .make_dominant(&CharVec::new(p.lambda.clone()))
            .entries()
            .to_vec()
    }

    /// Simple roots (group-side indices) of the integral system of `lambda`.
    pub fn integral_simples(&self, p: &LParameter) -> Vec<usize> {
        integral_system(self.group_datum(), &CharVec::new(p.lambda.clone())).simples
    }

    /// A Tits-group lift of the reflection in a dual root: `sigma_w sigma_i
    /// sigma_w^{-1}` for `alpha = w(alpha_i)`.
    fn dual_sigma(&self, dual_root: usize) -> TitsElement {
        let d = self.dual_datum();
        if let Some(i) = d.as_simple(dual_root) {
            return self.dual_tits.sigma_simple(i);
        }
        let (w, i) = express_as_simple(d, dual_root);
        self.dual_tits.conj(&self.dual_tits.sigma(&w), &self.dual_tits.sigma_simple(i))
    }

    /// Cross action by the reflection in a group root (dual root on the dual
    /// side): `lambda -> s lambda`, `y -> sigma y sigma^{-1}`.
    pub fn cross(&self, p: &LParameter, group_root: usize) -> LParameter {
        let a = dual_root_of_group(self.group_datum(), self.dual_datum(), group_root);
        let n = self.dual_sigma(a);
        let y = self.dual_tits.conj(&n, &p.y);
        let lambda = self.dual_datum().reflection_cochar(a).apply_q(&p.lambda);
        let out = LParameter { lambda, y };
        debug_assert_eq!(self.validate(&out), Ok(()));
        out
    }

    /// Cross action by a whole group-side Weyl element: `lambda -> w
    /// lambda`, `y -> sigma_w y sigma_w^{-1}` (with the canonical lift of
    /// the corresponding dual-side Weyl element).
    pub fn cross_weyl(&self, p: &LParameter, w: &WeylElt) -> LParameter {
        let dmat = w.mat_inv.transpose();
        let dw = reduced_word(self.dual_datum(), &dmat);
        let n = self.dual_tits.sigma(&dw);
        let y = self.dual_tits.conj(&n, &p.y);
        let lambda = dmat.apply_q(&p.lambda);
        let out = LParameter { lambda, y };
        debug_assert_eq!(self.validate(&out), Ok(()));
        out
    }

    /// Dual Cayley transform through a group root whose dual root is
    /// noncompact imaginary for `theta_y`: `y -> sigma_alpha y` (lambda
    /// unchanged). The result is validated exactly.
    pub fn cayley(&self, p: &LParameter, group_root: usize) -> Result<LParameter, LError> {
        let a = dual_root_of_group(self.group_datum(), self.dual_datum(), group_root);
        if self.grading(&p.y, a)? {
            return Err(LError::WrongRootType("dual Cayley needs a noncompact root".into()));
        }
        let n = self.dual_sigma(a);
        let y = self.dual_tits.mul(&n, &p.y);
        let out = LParameter { lambda: p.lambda.clone(), y };
        self.validate(&out)?;
        Ok(out)
    }

    /// Is `lambda` fixed up to sign by `theta_y` with all of its
    /// `theta_y`-fixed part zero (`theta_y lambda = -lambda`)?
    pub fn is_tempiric(&self, p: &LParameter) -> bool {
        let tl = self.theta_mat(p).apply_q(&p.lambda);
        tl.iter().zip(&p.lambda).all(|(a, b)| *a == -b.clone())
    }

    /// The continuous part `nu = (1 + theta_y) lambda / 2` of the parameter.
    pub fn nu(&self, p: &LParameter) -> Vec<Q> {
        let tl = self.theta_mat(p).apply_q(&p.lambda);
        let half = qr(1, 2);
        p.lambda.iter().zip(&tl).map(|(a, b)| (a + b) * &half).collect()
    }

    /// Deform the continuous part to zero: `lambda_c = (1 - theta_y) lambda
    /// / 2`, `y_c = e(-nu/2) y`. The result is tempiric with the same
    /// involution.
    pub fn tempiric_reduce(&self, p: &LParameter) -> LParameter {
        let nu = self.nu(p);
        let half = qr(1, 2);
        let lambda_c: Vec<Q> = p.lambda.iter().zip(&nu).map(|(a, b)| a - b).collect();
        let shift: Vec<Q> = nu.iter().map(|v| -v * &half).collect();
        let y = self.dual_tits.mul(&self.dual_tits.e(CochVec::new(shift)), &p.y);
        let out = LParameter { lambda: lambda_c, y };
        debug_assert_eq!(self.validate(&out), Ok(()));
        debug_assert!(self.is_tempiric(&out));
        out
    }

    /// Is the parameter in standard form: every `theta_y`-imaginary singular
    /// dual root is compact, and `lambda` is weakly integrally dominant?
    pub fn is_standard(&self, p: &LParameter) -> Result<bool, LError> {
        let gd = self.group_datum();
        let dd = self.dual_datum();
        let dtheta = self.dual_involution(p);
        for g in 0..gd.roots.len() {
            let a = dual_root_of_group(gd, dd, g);
            let pr = self.pairing(p, g);
            if gd.roots[g].is_positive() && q_is_int(&pr) && pr < Q::zero() {
                return Ok(false);
            }
            if dtheta.classify_root(dd, a) == RootType::Imaginary
                && pr.is_zero()
                && !self.grading(&p.y, a)?
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Reduce a parameter to standard form: integral cross actions to make
    /// `lambda` weakly integrally dominant, then Cayley transforms through
    /// noncompact imaginary singular dual roots (each strictly increases the
    /// dual split rank, so this terminates). Returns the standard parameter
    /// and the trail of steps applied, in order.
    pub fn standard_form(&self, p: &LParameter) -> Result<(LParameter, Vec<TrailStep>), LError> {
        self.validate(p)?;
        let gd = self.group_datum();
        let dd = self.dual_datum();
        let mut cur = p.clone();
        let mut trail = Vec::new();
        loop {
            // phase 1: weakly integrally dominant lambda
            let simples = self.integral_simples(&cur);
            if let Some(&g) = simples.iter().find(|&&g| self.pairing(&cur, g) < Q::zero()) {
                cur = self.cross(&cur, g);
                trail.push(TrailStep::Cross { group_root: g });
                continue;
            }
            // phase 2: noncompact imaginary singular dual roots
            let dtheta = self.dual_involution(&cur);
            let mut done = true;
            for g in 0..gd.roots.len() {
                if !gd.roots[g].is_positive() || !self.is_singular(&cur, g) {
                    continue;
                }
                let a = dual_root_of_group(gd, dd, g);
                if dtheta.classify_root(dd, a) == RootType::Imaginary
                    && !self.grading(&cur.y, a)?
                {
                    cur = self.cayley(&cur, g)?;
                    trail.push(TrailStep::Cayley { group_root: g });
                    done = false;
                    break;
                }
            }
            if done {
                debug_assert_eq!(self.is_standard(&cur), Ok(true));
                return Ok((cur, trail));
            }
        }
    }

    /// The subgroup of the group-side fiber group consisting of the final
    /// characters of the parameter: those killed by `alpha_bar` for every
    /// singular imaginary group root. (Sorted element list.)
    pub fn final_subgroup(&self, p: &LParameter) -> Result<Vec<Vec<Z>>, LError> {
        let ti = self.group_ti(p)?;
        let gd = self.group_datum();
        let tau = self.group_involution(p);
        let g = self.kgb.fiber_group(ti);
        let mut chars = Vec::new();
        for i in 0..gd.roots.len() {
            if gd.roots[i].is_positive()
                && self.is_singular(p, i)
                && tau.classify_root(gd, i) == RootType::Imaginary
            {
                chars.push(chartorus::alpha_bar(self.kgb, ti, i)?);
            }
        }
        Ok(g
            .elements()
            .into_iter()
            .filter(|u| chars.iter().all(|c| c.eval(u).is_zero()))
            .collect())
    }

    /// The KGB element attached to a complete parameter `(p, u)`: translate
    /// the fiber basepoint by `u`.
    pub fn e_phi(&self, p: &LParameter, u: &[Z]) -> Result<KgbElt, LError> {
        let ti = self.group_ti(p)?;
        Ok(chartorus::act(self.kgb, u, &self.kgb.basepoint_of(ti)))
    }

    /// Transport a fiber-group element backwards through one trail step:
    /// from the fiber after the step to the fiber before it.
    pub fn transport_back(
        &self,
        step: TrailStep,
        ti_after: usize,
        u_after: &[Z],
    ) -> Result<(usize, Vec<Z>), LError> {
        match step {
            TrailStep::Cross { group_root } => {
                // element-exact inverse of the forward tracking: undo the
                // conjugation by the Tits lift of the reflection
                let gd = self.group_datum();
                let w = crate::tits::reduced_word(gd, &gd.reflection_cochar(group_root));
                let x = chartorus::d_tau_inv(self.kgb, ti_after, u_after);
                let y = self.kgb.cross_word_back(&w.word, &x);
                Ok((y.ti, chartorus::d_tau(self.kgb, &y)))
            }
            TrailStep::Cayley { group_root } => {
                Ok(chartorus::cayley_char_map(self.kgb, ti_after, group_root, u_after)?)
            }
        }
    }

    /// Transport a fiber-group element backwards through a whole trail.
    pub fn transport_trail_back(
        &self,
        trail: &[TrailStep],
        ti_after: usize,
        u_after: &[Z],
    ) -> Result<(usize, Vec<Z>), LError> {
        let mut ti = ti_after;
        let mut u = u_after.to_vec();
        for step in trail.iter().rev() {
            let (ti2, u2) = self.transport_back(*step, ti, &u)?;
            ti = ti2;
            u = u2;
        }
        Ok((ti, u))
    }
}

#[cfg(test)]
mod unit {
    use super::*;
    use crate::kgb::KgbContext;
    use crate::rootdata::{build_datum, InnerClass, InnerClassSpec, Isogeny};

    fn setup() -> (InnerClass, InnerClass) {
        let d = build_datum("A1", Isogeny::SimplyConnected).unwrap();
        let ic = InnerClass::from_spec(d, &InnerClassSpec::Compact).unwrap();
        let dual = ic.dual();
        (ic, dual)
    }

    #[test]
    fn fundamental_parameter_is_standard_spherical() {
        let (ic, dual) = setup();
        let kgb = KgbContext::new(&ic).unwrap();
        let lctx = LCtx::new(&kgb, &dual);
        let p = lctx.fundamental_parameter();
        assert_eq!(lctx.validate(&p), Ok(()));
        assert_eq!(lctx.is_standard(&p), Ok(true));
        // group side: split Cartan, trivial fiber group, one final character
        let f = lctx.final_subgroup(&p).unwrap();
        assert_eq!(f.len(), 1);
        let x = lctx.e_phi(&p, &f[0]).unwrap();
        assert_eq!(x, lctx.kgb.basepoint_of(x.ti));
    }

    /// The rank-one worked example: at singular infinitesimal character the
    /// two torus values of `y` give a standard parameter with component
    /// group of order 1 and a nonstandard one whose standard form has
    /// component group of order 2.
    #[test]
    fn rank_one_singular_parameters() {
        let (ic, dual) = setup();
        let kgb = KgbContext::new(&ic).unwrap();
        let lctx = LCtx::new(&kgb, &dual);
        let n = 1;
        let lambda = vec![Q::zero()];
        let y0 = TitsElement {
            t: CochVec::zero(n),
            w: WeylElt::identity(n),
            flag: true,
        };
        let p0 = LParameter { lambda: lambda.clone(), y: y0 };
        assert_eq!(lctx.validate(&p0), Ok(()));
        assert_eq!(lctx.is_standard(&p0), Ok(true));
        assert_eq!(lctx.final_subgroup(&p0).unwrap().len(), 1);

        let y1 = TitsElement {
            t: CochVec::new(vec![qr(1, 2)]),
            w: WeylElt::identity(n),
            flag: true,
        };
        let p1 = LParameter { lambda, y: y1 };
        assert_eq!(lctx.validate(&p1), Ok(()));
        assert_eq!(lctx.is_standard(&p1), Ok(false));
        let (std1, trail) = lctx.standard_form(&p1).unwrap();
        assert_eq!(lctx.is_standard(&std1), Ok(true));
        assert_eq!(trail.len(), 1);
        assert!(matches!(trail[0], TrailStep::Cayley { .. }));
        // standard form lives over the compact Cartan; two finals (the two
        // limits of discrete series)
        let f = lctx.final_subgroup(&std1).unwrap();
        assert_eq!(f.len(), 2);
        // their KGB images are the two noncompact points of the
        // fundamental fiber, both with square z = e(rho_check)
        let alpha = kgb.datum().simple_index(0);
        for u in &f {
            let x = lctx.e_phi(&std1, u).unwrap();
            assert!(!kgb.is_compact(&x, alpha).unwrap());
            assert_eq!(kgb.square(&x), kgb.base_square());
        }
    }

    #[test]
    fn tempiric_reduce_discrete_series() {
        // regular lambda over the compact dual Cartan: already theta-stable;
        // reduction kills nothing new on the imaginary part
        let (ic, dual) = setup();
        let kgb = KgbContext::new(&ic).unwrap();
        let lctx = LCtx::new(&kgb, &dual);
        let p = lctx.fundamental_parameter();
        assert!(!lctx.is_tempiric(&p));
        let c = lctx.tempiric_reduce(&p);
        assert!(lctx.is_tempiric(&c));
        assert_eq!(lctx.validate(&c), Ok(()));
        // the deformed parameter keeps the split involution and kills lambda
        assert!(c.lambda.iter().all(|v| v.is_zero()));
    }
}
