//! Parameters in `(x, Lambda)` form: a KGB element together with the
//! differential part `dLambda` and the discrete (compact-torus) part
//! `kappa` of a character of the relevant torus cover. Provides the
//! construction from a complete Langlands parameter, the dominance and
//! finality tests, Weyl-group twists with their `rho_real` character
//! shift, and exact deformations of the continuous part (wall crossings
//! and central deformations), which leave `kappa` unchanged.

use crate::kgb::{KgbContext, KgbElt};
use crate::lattice::*;
use crate::lparams::{dual_root_of_group, LCtx, LError, LParameter};
use crate::rootdata::{restricted_system, RestrictedSystem, RootType};
use crate::tits::WeylElt;
use num::Zero;

/// A parameter in `(x, Lambda)` coordinates, keeping its Langlands
/// parameter as the dual link (needed for parity tests and Cayley
/// transforms).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtlasParameter {
    pub x: KgbElt,
    /// differential of `Lambda` (equals the `lambda` of the dual link)
    pub d_lambda: Vec<Q>,
    /// discrete part: an element of `rho + X^*`, reduced modulo
    /// `(1 + theta_y) X^*`
    pub kappa: Vec<Q>,
    /// the underlying Langlands parameter
    pub phi: LParameter,
}

/// Apply a group-side Weyl element to a rational character (the transpose
/// of the inverse of its cocharacter matrix).
pub fn char_apply(w: &WeylElt, v: &[Q]) -> Vec<Q> {
    w.mat_inv.transpose().apply_q(v)
}

/// Half the sum of the positive real roots of the involution of `ti`.
pub fn rho_real(kgb: &KgbContext, ti: usize) -> Vec<Q> {
    let datum = kgb.datum();
    let tau = kgb.involution(&KgbElt { ti, t: Vec::new() });
    let half = qr(1, 2);
    let mut acc = vec![Q::zero(); datum.rank];
    for i in 0..datum.roots.len() {
        if datum.roots[i].is_positive() && tau.classify_root(datum, i) == RootType::Real {
            for (a, b) in acc.iter_mut().zip(&datum.roots[i].vec) {
                *a += Q::from_integer(b.clone()) * &half;
            }
        }
    }
    acc
}

/// The discrete part `kappa` of a parameter, computed from `(lambda, y)`
/// alone: with `mu = t_y - lambda/2 - rho/2` (the exponent of `y` against
/// the distinguished coset representative), `kappa = (1 - theta_y) lambda
/// / 2 - (1 + theta_y) mu`, an element of `rho + X^*` canonically reduced
/// modulo `(1 + theta_y) X^*`.
pub fn kappa_of(lctx: &LCtx, phi: &LParameter) -> Vec<Q> {
    let n = lctx.group_datum().rank;
    let theta = lctx.theta_mat(phi);
    let rho = lctx.group_datum().rho.entries();
    let half = qr(1, 2);
    let mu: Vec<Q> = (0..n)
        .map(|r| &phi.y.t.entries()[r] - (&phi.lambda[r] + &rho[r]) * &half)
        .collect();
    let tl = theta.apply_q(&phi.lambda);
    let tmu = theta.apply_q(&mu);
    let kappa: Vec<Q> = (0..n)
        .map(|r| (&phi.lambda[r] - &tl[r]) * &half - &mu[r] - &tmu[r])
        .collect();
    // reduce kappa - rho modulo the lattice (1 + theta) X^*
    let mut gens: Vec<Vec<Q>> = Vec::new();
    for j in 0..n {
        let col: Vec<Q> = (0..n)
            .map(|r| {
                let mut v = Q::from_integer(theta.at(r, j).clone());
                if r == j {
                    v += Q::from_integer(Z::from(1));
                }
                v
            })
            .collect();
        gens.push(col);
    }
    let basis = rational_lattice_basis(n, &gens);
    let shifted: Vec<Q> = kappa.iter().zip(rho).map(|(k, r)| k - r).collect();
    assert!(
        shifted.iter().all(q_is_int),
        "kappa must lie in rho + X^*"
    );
    let red = reduce_mod_lattice(&shifted, &basis);
    red.iter().zip(rho).map(|(k, r)| k + r).collect()
}

impl AtlasParameter {
    /// Build the `(x, Lambda)` parameter of a complete parameter
    /// `(phi, u)`: `x` is the KGB image of the character `u`, `dLambda`
    /// is `lambda`, and `kappa` comes from the exponent recipe.
    pub fn from_complete(lctx: &LCtx, phi: &LParameter, u: &[Z]) -> Result<Self, LError> {
        let x = lctx.e_phi(phi, u)?;
        Ok(AtlasParameter {
            x,
            d_lambda: phi.lambda.clone(),
            kappa: kappa_of(lctx, phi),
            phi: phi.clone(),
        })
    }

    /// Definition-level dominance: `<dLambda, coroot>` nonnegative on
    /// positive imaginary roots and strictly positive on positive compact
    /// imaginary roots.
    pub fn check_dominance(&self, lctx: &LCtx) -> Result<bool, LError> {
        let kgb = lctx.kgb;
        let datum = kgb.datum();
        let dl = CharVec::new(self.d_lambda.clone());
        for i in 0..datum.roots.len() {
            if !datum.roots[i].is_positive()
                || kgb.root_type(&self.x, i) != RootType::Imaginary
            {
                continue;
            }
            let p = dl.pair(&datum.roots[i].coroot_vec());
            if p < Q::zero() {
                return Ok(false);
            }
            if p.is_zero() && kgb.is_compact(&self.x, i)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Finality: every positive singular real root passes the parity test,
    /// i.e. its dual root is compact for `theta_y` (otherwise an inverse
    /// Cayley transform through it produces a more reduced parameter).
    pub fn is_final(&self, lctx: &LCtx) -> Result<bool, LError> {
        let kgb = lctx.kgb;
        let datum = kgb.datum();
        let dd = lctx.dual_datum();
        for i in 0..datum.roots.len() {
            if !datum.roots[i].is_positive()
                || kgb.root_type(&self.x, i) != RootType::Real
                || !lctx.is_singular(&self.phi, i)
            {
                continue;
            }
            let a = dual_root_of_group(datum, dd, i);
            if !lctx.grading(&self.phi.y, a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Twist by a Weyl element: `x -> w x` (cross action), `dLambda -> w
    /// dLambda`, `kappa -> w kappa + (w rho_real - rho_real)`, and the dual
    /// link is crossed by the same element. For `w` preserving the set of
    /// positive imaginary roots this is an equivalence of parameters.
    pub fn weyl_twist(&self, lctx: &LCtx, w: &WeylElt) -> AtlasParameter {
        let kgb = lctx.kgb;
        let x2 = kgb.cross_word(&w.word, &self.x);
        let rr = rho_real(kgb, self.x.ti);
        let wrr = char_apply(w, &rr);
        let dl2 = char_apply(w, &self.d_lambda);
        let k2: Vec<Q> = char_apply(w, &self.kappa)
            .iter()
            .zip(wrr.iter().zip(&rr))
            .map(|(k, (a, b))| k + a - b)
            .collect();
        let phi2 = lctx.cross_weyl(&self.phi, w);
        AtlasParameter { x: x2, d_lambda: dl2, kappa: k2, phi: phi2 }
    }

    /// Exact deformation of the continuous part by `delta` in the
    /// `(+1)`-eigenspace of `theta_y`: `lambda -> lambda - delta`,
    /// `t_y -> t_y - delta/2`; `x` and `kappa` are unchanged.
    pub fn deform(&self, lctx: &LCtx, delta: &[Q]) -> Result<AtlasParameter, LError> {
        let theta = lctx.theta_mat(&self.phi);
        let td = theta.apply_q(delta);
        if td.iter().zip(delta).any(|(a, b)| a != b) {
            return Err(LError::Invalid("deformation must be theta_y-fixed".into()));
        }
        let half = qr(1, 2);
        let lambda: Vec<Q> =
            self.phi.lambda.iter().zip(delta).map(|(a, b)| a - b).collect();
        let shift: Vec<Q> = delta.iter().map(|v| -v * &half).collect();
        let y = lctx
            .dual_tits
            .mul(&lctx.dual_tits.e(CochVec::new(shift)), &self.phi.y);
        let phi = LParameter { lambda: lambda.clone(), y };
        lctx.validate(&phi)?;
        debug_assert_eq!(kappa_of(lctx, &phi), self.kappa);
        Ok(AtlasParameter {
            x: self.x.clone(),
            d_lambda: lambda,
            kappa: self.kappa.clone(),
            phi,
        })
    }

    /// Deform the continuous part to the wall of one simple restricted
    /// root: subtract `<nu, beta_check> omega_beta` where `omega_beta` is
    /// the fundamental weight of the restricted system.
    pub fn deform_to_wall(
        &self,
        lctx: &LCtx,
        rs: &RestrictedSystem,
        simple_pos: usize,
    ) -> Result<AtlasParameter, LError> {
        let nu = lctx.nu(&self.phi);
        let omega = restricted_fundamental_weight(rs, simple_pos);
        let c = CharVec::new(nu).pair(&rs.restricted[rs.simples[simple_pos]].coroot);
        let delta: Vec<Q> = omega.iter().map(|v| v * &c).collect();
        self.deform(lctx, &delta)
    }

    /// Deform away the central part of the continuous parameter: the
    /// component of `nu` orthogonal to every restricted coroot.
    pub fn deform_central(&self, lctx: &LCtx) -> Result<AtlasParameter, LError> {
        let tau = lctx.group_involution(&self.phi);
        let rs = restricted_system(lctx.group_datum(), &tau);
        let nu = lctx.nu(&self.phi);
        let mut nu_r = vec![Q::zero(); nu.len()];
        for j in 0..rs.simples.len() {
            let omega = restricted_fundamental_weight(&rs, j);
            let c = CharVec::new(nu.clone()).pair(&rs.restricted[rs.simples[j]].coroot);
            for (a, b) in nu_r.iter_mut().zip(&omega) {
                *a += b * &c;
            }
        }
        let delta: Vec<Q> = nu.iter().zip(&nu_r).map(|(a, b)| a - b).collect();
        self.deform(lctx, &delta)
    }
}

/// The fundamental weight of the restricted root system dual to the
/// `simple_pos`-th simple restricted coroot, expressed in the ambient
/// character space (inside the span of the simple restricted roots).
pub fn restricted_fundamental_weight(rs: &RestrictedSystem, simple_pos: usize) -> Vec<Q> {
    let k = rs.simples.len();
    assert!(simple_pos < k, "restricted simple index out of range");
    let dim = rs.restricted[rs.simples[0]].vec.dim();
    // solve sum_s c_s <vec_s, coroot_j> = delta_{j, simple_pos}
    let mut m = QMatrix::zero(k, k);
    for j in 0..k {
        for s in 0..k {
            *m.at_mut(j, s) =
                rs.restricted[rs.simples[s]].vec.pair(&rs.restricted[rs.simples[j]].coroot);
        }
    }
    let mut rhs = vec![Q::zero(); k];
    rhs[simple_pos] = Q::from_integer(Z::from(1));
    let c = m.solve(&rhs).expect("restricted Cartan matrix is invertible");
    let mut omega = vec![Q::zero(); dim];
    for (s, cs) in c.iter().enumerate() {
        for (o, v) in omega.iter_mut().zip(rs.restricted[rs.simples[s]].vec.entries()) {
            *o += v * cs;
        }
    }
    omega
}

#[cfg(test)]
mod unit {
    use super::*;
    use crate::kgb::KgbContext;
    use crate::rootdata::{build_datum, InnerClass, InnerClassSpec, Isogeny};

    #[test]
    fn rank_one_principal_series_parameter() {
        let d = build_datum("A1", Isogeny::SimplyConnected).unwrap();
        let ic = InnerClass::from_spec(d, &InnerClassSpec::Compact).unwrap();
        let dual = ic.dual();
        let kgb = KgbContext::new(&ic).unwrap();
        let lctx = LCtx::new(&kgb, &dual);
        let phi = lctx.fundamental_parameter();
        let f = lctx.final_subgroup(&phi).unwrap();
        let ap = AtlasParameter::from_complete(&lctx, &phi, &f[0]).unwrap();
        assert!(ap.check_dominance(&lctx).unwrap());
        assert!(ap.is_final(&lctx).unwrap());
        // kappa lies in rho + X^*
        let rho = kgb.datum().rho.entries().to_vec();
        assert!(ap.kappa.iter().zip(&rho).all(|(k, r)| q_is_int(&(k - r))));
        // deforming the continuous part to zero keeps kappa and x
        let tau = lctx.group_involution(&phi);
        let rs = restricted_system(kgb.datum(), &tau);
        assert_eq!(rs.simples.len(), 1);
        let ap2 = ap.deform_to_wall(&lctx, &rs, 0).unwrap();
        assert_eq!(ap2.kappa, ap.kappa);
        assert_eq!(ap2.x, ap.x);
        assert!(lctx.is_tempiric(&ap2.phi));
    }
}
