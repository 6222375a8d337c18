//! The space of strong involutions ("KGB space") of an inner class:
//! elements `x = e(t) sigma_w xi` with `x^2` central, modulo torus
//! conjugation, together with cross actions, gradings of imaginary roots,
//! and Cayley transforms — all computed by exact Tits-group arithmetic.

use crate::lattice::*;
use crate::rootdata::{BasedRootDatum, InnerClass, Involution, RootType};
use crate::chevalley::ChevalleySigns;
use crate::tits::*;
use num::{One, Zero};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KgbError {
    #[error("fiber is infinite (central torus not split by the involution)")]
    InfiniteFiber,
    #[error("root has the wrong type for this operation: {0}")]
    WrongRootType(String),
    #[error("{0}")]
    Other(String),
}

/// One KGB element: an index into the twisted-involution list plus the
/// canonical normalized absolute torus exponent (a rational cocharacter in
/// the (+1)-eigenspace of the involution, reduced modulo the projected
/// cocharacter lattice).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KgbElt {
    pub ti: usize,
    pub t: Vec<Q>,
}

/// Per-twisted-involution cached data.
struct TauData {
    tau: Involution,
    /// saturated integer basis of `ker(1 - tau)` (columns)
    plus_basis: Vec<Vec<Z>>,
    /// basis of the projected cocharacter lattice `P(X_*)`, `P = (1+tau)/2`
    dbar_basis: Vec<Vec<Q>>,
    /// the finite fiber group `(1/2)(L_Z ∩ E_+) / P(X_*)`; when the center
    /// contains a torus fixed by the involution this is infinite, and the
    /// z-relative group `(1/2)(X_* ∩ E_+) / P(X_*)` is used instead
    fiber_group: FiniteAbelianGroup,
    /// true when the z-relative fallback group is in use
    central_torus: bool,
}

/// Context for KGB computations in one inner class.
pub struct KgbContext<'a> {
    pub ic: &'a InnerClass,
    pub tits: TitsGroup<'a>,
    pub tw_invs: Vec<TwistedInvolution>,
    tau_data: Vec<TauData>,
    ti_index: HashMap<Vec<Z>, usize>,
    signs: ChevalleySigns,
}

impl<'a> KgbContext<'a> {
    pub fn new(ic: &'a InnerClass) -> Result<Self, KgbError> {
        let tits = TitsGroup::new(ic);
        let tw_invs = twisted_involutions(ic);
        let mut tau_data = Vec::with_capacity(tw_invs.len());
        let mut ti_index = HashMap::new();
        for (i, ti) in tw_invs.iter().enumerate() {
            ti_index.insert(ti.w.mat.entries_row_major(), i);
            tau_data.push(Self::build_tau_data(&ic.datum, involution_of(ic, ti))?);
        }
        let signs = ChevalleySigns::new(&ic.datum);
        Ok(KgbContext { ic, tits, tw_invs, tau_data, ti_index, signs })
    }

    fn build_tau_data(datum: &BasedRootDatum, tau: Involution) -> Result<TauData, KgbError> {
        let n = datum.rank;
        // ker(1 - tau) over Z, saturated
        let mut one_minus = IntMatrix::identity(n);
        for r in 0..n {
            for c in 0..n {
                *one_minus.at_mut(r, c) -= tau.mat.at(r, c);
            }
        }
        let plus_basis = int_kernel(&one_minus);
        let k = plus_basis.len();
        // P(X_*) generators: (1+tau)/2 e_j
        let half = qr(1, 2);
        let mut dbar_gens: Vec<Vec<Q>> = Vec::new();
        for j in 0..n {
            let col: Vec<Q> = (0..n)
                .map(|r| {
                    let mut v = Q::from_integer(tau.mat.at(r, j).clone());
                    if r == j {
                        v += Q::one();
                    }
                    v * &half
                })
                .collect();
            dbar_gens.push(col);
        }
        let dbar_basis = rational_lattice_basis(n, &dbar_gens);
        // N = (1/2)(L_Z ∩ E_+) where L_Z = {s : <alpha_i, s> in Z}
        // parametrize E_+ by the columns K of plus_basis; condition A K u in Z^m
        let m = datum.ss_rank;
        let mut ak = QMatrix::zero(m, k);
        for i in 0..m {
            for (j, kc) in plus_basis.iter().enumerate() {
                let mut acc = Q::zero();
                for r in 0..n {
                    acc += Q::from_integer(datum.simple_roots.at(i, r) * &kc[r]);
                }
                *ak.at_mut(i, j) = acc;
            }
        }
        let (lat_u, subspace_u) = integral_preimage(&ak);
        let to_ambient = |u: &Vec<Q>| -> Vec<Q> {
            (0..n)
                .map(|r| {
                    let mut acc = Q::zero();
                    for (j, kc) in plus_basis.iter().enumerate() {
                        acc += Q::from_integer(kc[r].clone()) * &u[j];
                    }
                    acc * &half
                })
                .collect()
        };
        let full = if subspace_u.is_empty() {
            let n_gens: Vec<Vec<Q>> = lat_u.iter().map(&to_ambient).collect();
            match FiniteAbelianGroup::from_lattice_quotient(n, &n_gens, &dbar_gens) {
                Ok(g) => Some(g),
                Err(LatticeError::FreePart) => None,
                Err(other) => return Err(KgbError::Other(other.to_string())),
            }
        } else {
            None
        };
        let (fiber_group, central_torus) = match full {
            Some(g) => (g, false),
            None => {
                // z-relative fallback: translations that preserve the exact
                // central square, (1/2)(X_* ∩ E_+) / P(X_*) — always finite
                let n_gens: Vec<Vec<Q>> = plus_basis
                    .iter()
                    .map(|kc| {
                        (0..n)
                            .map(|r| Q::from_integer(kc[r].clone()) * &half)
                            .collect()
                    })
                    .collect();
                let g = FiniteAbelianGroup::from_lattice_quotient(n, &n_gens, &dbar_gens)
                    .map_err(|e| KgbError::Other(e.to_string()))?;
                (g, true)
            }
        };
        Ok(TauData { tau, plus_basis, dbar_basis, fiber_group, central_torus })
    }

    pub fn datum(&self) -> &BasedRootDatum {
        &self.ic.datum
    }

    pub fn involution(&self, x: &KgbElt) -> &Involution {
        &self.tau_data[x.ti].tau
    }

    pub fn twisted_involution(&self, x: &KgbElt) -> &TwistedInvolution {
        &self.tw_invs[x.ti]
    }

    /// The fiber group attached to the involution of `x` (the fiber of the
    /// KGB space over its twisted involution is a torsor under this group).
    pub fn fiber_group(&self, ti: usize) -> &FiniteAbelianGroup {
        &self.tau_data[ti].fiber_group
    }

    /// Does this fiber use the z-relative fiber group (because the center
    /// contains an involution-fixed torus, making the full group infinite)?
    pub fn is_central_torus_fiber(&self, ti: usize) -> bool {
        self.tau_data[ti].central_torus
    }

    /// Saturated integer basis of the (+1)-eigenspace `ker(1 - tau)` of the
    /// involution attached to `ti` (columns).
    pub fn plus_basis(&self, ti: usize) -> &[Vec<Z>] {
        &self.tau_data[ti].plus_basis
    }

    /// Reduce a torus exponent modulo the projected cocharacter lattice
    /// of `ti` (the normalization used for fiber coordinates).
    pub fn reduce_exponent(&self, ti: usize, t: &[Q]) -> Vec<Q> {
        reduce_mod_lattice(t, &self.tau_data[ti].dbar_basis)
    }

    pub fn ti_of_involution(&self, tau: &Involution) -> Option<usize> {
        let w = tau.mat.mul(&self.ic.gamma);
        self.ti_index.get(&w.entries_row_major()).copied()
    }

    /// The Tits-group representative `e(t) sigma_w xi` of a KGB element.
    pub fn tits_rep(&self, x: &KgbElt) -> TitsElement {
        TitsElement {
            t: CochVec::new(x.t.clone()).mod1(),
            w: self.tw_invs[x.ti].w.clone(),
            flag: true,
        }
    }

    /// Canonicalize a strong involution given as a Tits element: project the
    /// exponent to the (+1)-eigenspace of its involution (torus conjugation)
    /// and reduce modulo the projected cocharacter lattice.
    pub fn normalize(&self, e: &TitsElement) -> KgbElt {
        assert!(e.flag, "strong involutions live in the xi-coset");
        let ti = *self
            .ti_index
            .get(&e.w.mat.entries_row_major())
            .expect("Weyl part of a strong involution is a twisted involution");
        let td = &self.tau_data[ti];
        let n = self.datum().rank;
        // project: t -> (1 + tau)/2 t
        let half = qr(1, 2);
        let tt = td.tau.mat.apply_q(e.t.entries());
        let proj: Vec<Q> =
            (0..n).map(|r| (&e.t.entries()[r] + &tt[r]) * &half).collect();
        let red = reduce_mod_lattice(&proj, &td.dbar_basis);
        KgbElt { ti, t: red }
    }

    /// The distinguished basepoint `e(rho_check/2) xi` of the fundamental
    /// fiber.
    pub fn basepoint(&self) -> KgbElt {
        let t = self.datum().rho_check.scale(&qr(1, 2));
        let e = TitsElement { t, w: WeylElt::identity(self.datum().rank), flag: true };
        self.normalize(&e)
    }

    /// The canonical basepoint `e(rho_check/2) sigma_{w_tau} xi` of the fiber
    /// over twisted involution `ti`.
    pub fn basepoint_of(&self, ti: usize) -> KgbElt {
        let t = self.datum().rho_check.scale(&qr(1, 2));
        let e = TitsElement { t, w: self.tw_invs[ti].w.clone(), flag: true };
        let x = self.normalize(&e);
        debug_assert_eq!(x.ti, ti);
        x
    }

    /// `x^2` as a central torus exponent (mod `X_*`).
    pub fn square(&self, x: &KgbElt) -> CochVec {
        let e = self.tits_rep(x);
        let sq = self.tits.mul(&e, &e);
        assert!(sq.w.is_identity() && !sq.flag, "square of a strong involution is central");
        sq.t
    }

    /// Enumerate the fundamental fiber (over the distinguished involution).
    pub fn fundamental_fiber(&self) -> Vec<KgbElt> {
        let ti = self
            .ti_index
            .get(&IntMatrix::identity(self.datum().rank).entries_row_major())
            .copied()
            .expect("identity is a twisted involution");
        let td = &self.tau_data[ti];
        let base = self.basepoint();
        let mut out = Vec::new();
        for g in td.fiber_group.elements() {
            let offset = td.fiber_group.rep(&g);
            let t: Vec<Q> = base.t.iter().zip(&offset).map(|(a, b)| a + b).collect();
            let e = TitsElement {
                t: CochVec::new(t),
                w: WeylElt::identity(self.datum().rank),
                flag: true,
            };
            out.push(self.normalize(&e));
        }
        out.sort();
        out.dedup();
        out
    }

    /// Cross action of the simple reflection `s_i`: conjugation by `sigma_i`.
    pub fn cross(&self, i: usize, x: &KgbElt) -> KgbElt {
        let s = self.tits.sigma_simple(i);
        let conj = self.tits.conj(&s, &self.tits_rep(x));
        self.normalize(&conj)
    }

    /// Conjugation by an arbitrary Weyl element (left cross action by `w`).
    pub fn cross_word(&self, word: &[usize], x: &KgbElt) -> KgbElt {
        let mut cur = x.clone();
        for &i in word.iter().rev() {
            cur = self.cross(i, &cur);
        }
        cur
    }

    /// The exact inverse of [`cross_word`]: conjugation by `sigma_w^{-1}`
    /// (which can differ from conjugation by `sigma_{w^{-1}}` on torus
    /// parts).
    pub fn cross_word_back(&self, word: &[usize], x: &KgbElt) -> KgbElt {
        let w = crate::tits::weyl_from_word(self.datum(), word);
        let s = self.tits.sigma(&w);
        let sinv = self.tits.inverse(&s);
        let conj = self.tits.mul(&self.tits.mul(&sinv, &self.tits_rep(x)), &s);
        self.normalize(&conj)
    }

    /// Type of root `alpha` (root index) at `x`.
    pub fn root_type(&self, x: &KgbElt, alpha: usize) -> RootType {
        self.tau_data[x.ti].tau.classify_root(self.datum(), alpha)
    }

    /// Grading of an imaginary root at `x`: `true` = compact.
    /// Computed as the sign of `Ad(x)` on the root vector `X_alpha`:
    /// `Ad(e(t) sigma_w xi) X_alpha = e^{2 pi i <alpha, t>} . eps_xi(alpha)
    ///  . sign(w, gamma-image) . X_alpha`, which is `+1` exactly for compact.
    pub fn is_compact(&self, x: &KgbElt, alpha: usize) -> Result<bool, KgbError> {
        if self.root_type(x, alpha) != RootType::Imaginary {
            return Err(KgbError::WrongRootType("grading needs an imaginary root".into()));
        }
        let datum = self.datum();
        // xi part first: xi(X_alpha) = eps . X_{gamma(alpha)}
        let eps = self.signs.xi_sign(self.ic, alpha);
        let galpha = datum
            .act_on_root(&self.ic.gamma, alpha)
            .expect("gamma permutes the roots");
        // then Ad(sigma_w) X_{gamma(alpha)} = sign . X_{w(gamma(alpha))}; on
        // characters w acts through the inverse-transpose of its cocharacter
        // matrix, and the image is alpha again exactly because alpha is
        // imaginary for tau = w . gamma
        let w = &self.tw_invs[x.ti].w;
        let ws = self.signs.word_sign(datum, w, galpha);
        debug_assert_eq!(datum.act_on_root(&w.mat_inv, galpha), Some(alpha));
        // torus part: e^{2 pi i <alpha, t>} with <alpha, t> in (1/2) Z
        let pairing = datum.roots[alpha].char_vec().pair(&CochVec::new(x.t.clone()));
        let doubled = &pairing * qi(2);
        assert!(q_is_int(&doubled), "imaginary-root pairing must be half-integral");
        let torus_sign = if q_is_int(&pairing) { 1 } else { -1 };
        Ok(eps * ws * torus_sign == 1)
    }

    /// All noncompact imaginary roots at `x`.
    pub fn noncompact_roots(&self, x: &KgbElt) -> Vec<usize> {
        (0..self.datum().roots.len())
            .filter(|&a| {
                self.root_type(x, a) == RootType::Imaginary && !self.is_compact(x, a).unwrap()
            })
            .collect()
    }

    /// Cayley transform through a noncompact imaginary root that is simple in
    /// the ambient system: `x -> sigma_alpha . x` (left multiplication).
    pub fn cayley_up_simple(&self, i: usize, x: &KgbElt) -> Result<KgbElt, KgbError> {
        let alpha = self.datum().simple_index(i);
        if self.root_type(x, alpha) != RootType::Imaginary {
            return Err(KgbError::WrongRootType("Cayley needs an imaginary root".into()));
        }
        if self.is_compact(x, alpha)? {
            return Err(KgbError::WrongRootType("Cayley needs a noncompact root".into()));
        }
        let s = self.tits.sigma_simple(i);
        let prod = self.tits.mul(&s, &self.tits_rep(x));
        Ok(self.normalize(&prod))
    }

    /// Cayley transform through any noncompact imaginary root `alpha`:
    /// conjugate by a Weyl chain `w` making `w(alpha)` simple, transform
    /// there, and conjugate back.
    pub fn cayley_up(&self, alpha: usize, x: &KgbElt) -> Result<KgbElt, KgbError> {
        let datum = self.datum();
        if let Some(i) = datum.as_simple(alpha) {
            return self.cayley_up_simple(i, x);
        }
        let (w, i) = express_as_simple(datum, alpha);
        // alpha = w(alpha_i), so alpha at x matches alpha_i at the conjugate
        // sigma_w^{-1} x sigma_w: transform there and conjugate back
        let winv = w.inverse();
        let moved = self.cross_word(&winv.word, x);
        let up = self.cayley_up_simple(i, &moved)?;
        Ok(self.cross_word(&w.word, &up))
    }

    /// Inverse Cayley transform: all `y` in the given KGB list with
    /// `cayley_up(alpha at y-level) = x`, where `alpha` is real at `x`.
    pub fn cayley_down(&self, alpha: usize, x: &KgbElt, all: &[KgbElt]) -> Result<Vec<KgbElt>, KgbError> {
        if self.root_type(x, alpha) != RootType::Real {
            return Err(KgbError::WrongRootType("inverse Cayley needs a real root".into()));
        }
        let mut out = Vec::new();
        for y in all {
            if self.root_type(y, alpha) == RootType::Imaginary
                && !self.is_compact(y, alpha)?
                && self.cayley_up(alpha, y)? == *x
            {
                out.push(y.clone());
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Enumerate the whole KGB space: close the fundamental fiber under
    /// simple cross actions and simple Cayley transforms. Returns the
    /// elements sorted by (involution length, involution word, exponent),
    /// giving stable ids.
    pub fn enumerate(&self) -> Vec<KgbElt> {
        // every fiber is a torsor under its character group acting on the
        // fiber basepoint, so the space is the union of those orbits (cross
        // and Cayley closure from the fundamental fiber can miss fibers
        // whose central squares never occur there)
        let mut out: Vec<KgbElt> = Vec::new();
        for ti in 0..self.tw_invs.len() {
            let b = self.basepoint_of(ti);
            for u in self.fiber_group(ti).elements() {
                out.push(crate::chartorus::act(self, &u, &b));
            }
        }
        out.sort_by(|a, b| {
            let la = self.tw_invs[a.ti].w.length();
            let lb = self.tw_invs[b.ti].w.length();
            (la, &self.tw_invs[a.ti].w.word, &a.t).cmp(&(lb, &self.tw_invs[b.ti].w.word, &b.t))
        });
        out
    }

    /// Elements of the fiber over one twisted involution, from a full
    /// enumeration.
    pub fn fiber_of(&self, all: &[KgbElt], ti: usize) -> Vec<KgbElt> {
        all.iter().filter(|x| x.ti == ti).cloned().collect()
    }

    /// Filter an enumeration by the central value of `x^2`.
    pub fn with_square(&self, all: &[KgbElt], z: &CochVec) -> Vec<KgbElt> {
        let zn = z.mod1();
        all.iter().filter(|x| self.square(x) == zn).cloned().collect()
    }

    /// The basepoint's central square `z = e(rho_check)` (mod `X_*`).
    pub fn base_square(&self) -> CochVec {
        self.square(&self.basepoint())
    }
}

impl PartialOrd for KgbElt {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for KgbElt {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.ti, &self.t).cmp(&(other.ti, &other.t))
    }
}

#[cfg(test)]
mod unit {
    use super::*;
    use crate::rootdata::{build_datum, InnerClass, InnerClassSpec, Isogeny};

    #[test]
    fn sl2_kgb_counts() {
        let d = build_datum("A1", Isogeny::SimplyConnected).unwrap();
        let ic = InnerClass::from_spec(d, &InnerClassSpec::Compact).unwrap();
        let ctx = KgbContext::new(&ic).unwrap();
        let all = ctx.enumerate();
        assert_eq!(all.len(), 5);
        let fund = ctx.fundamental_fiber();
        assert_eq!(fund.len(), 4);
    }

    #[test]
    fn pgl2_kgb_counts() {
        let d = build_datum("A1", Isogeny::Adjoint).unwrap();
        let ic = InnerClass::from_spec(d, &InnerClassSpec::Compact).unwrap();
        let ctx = KgbContext::new(&ic).unwrap();
        let all = ctx.enumerate();
        assert_eq!(all.len(), 3);
        assert_eq!(ctx.fundamental_fiber().len(), 2);
    }

    #[test]
    fn sl2_basepoint_noncompact_and_squares() {
        let d = build_datum("A1", Isogeny::SimplyConnected).unwrap();
        let ic = InnerClass::from_spec(d, &InnerClassSpec::Compact).unwrap();
        let ctx = KgbContext::new(&ic).unwrap();
        let b = ctx.basepoint();
        let alpha = ctx.datum().simple_index(0);
        assert!(!ctx.is_compact(&b, alpha).unwrap());
        // z-filter: x^2 = e(rho_check) picks out 2 fundamental-fiber points
        // plus the split element
        let all = ctx.enumerate();
        let z = ctx.base_square();
        let filtered = ctx.with_square(&all, &z);
        assert_eq!(filtered.len(), 3);
    }
}
