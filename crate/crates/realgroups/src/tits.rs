//! The Weyl group, twisted involutions, and exact arithmetic in the Tits
//! group extension `H[2]~ . W` generated by the canonical representatives
//! `sigma_s = exp(pi i alpha_check_s) relative to a pinning.
//!
//! A Tits-group element is stored as `e(t) . sigma_w . xi^f` where
//! `e(t) = exp(2 pi i t)` for `t` a rational cocharacter taken mod `X_*`,
//! `sigma_w` is the canonical lift of a Weyl element, and `xi` is the pinned
//! lift of the distinguished automorphism `gamma` of the inner class
//! (`f = 0, 1`; `xi^2 = 1` and `xi sigma_w xi^{-1} = sigma_{gamma(w)}`).
//!
//! The product rule is determined by `sigma_s sigma_w = sigma_{sw}` when
//! lengths add and `sigma_s sigma_w = m_s sigma_{sw}` (with
//! `m_s = e(alpha_check_s / 2)`) when they drop.

use crate::lattice::*;
use crate::rootdata::{BasedRootDatum, InnerClass, Involution};
use num::Signed;
use std::collections::HashMap;

/// A Weyl group element: a reduced word in the simple reflections together
/// with its matrix on `X_*` (and the inverse matrix).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElt {
    pub word: Vec<usize>,
    /// action on `X_*`
    pub mat: IntMatrix,
    pub mat_inv: IntMatrix,
}

impl WeylElt {
    pub fn identity(rank: usize) -> Self {
        WeylElt { word: Vec::new(), mat: IntMatrix::identity(rank), mat_inv: IntMatrix::identity(rank) }
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn inverse(&self) -> WeylElt {
        let mut w = self.word.clone();
        w.reverse();
        WeylElt { word: w, mat: self.mat_inv.clone(), mat_inv: self.mat.clone() }
    }
}

/// Recover a reduced word for a matrix on `X_*` by greedy descent: while
/// `w != 1`, find a simple `alpha_i` with `w^{-1} alpha_i < 0` (equivalently
/// `l(s_i w) < l(w)`) and strip it on the left.
pub fn reduced_word(datum: &BasedRootDatum, mat: &IntMatrix) -> WeylElt {
    let mut word_rev: Vec<usize> = Vec::new();
    let mut cur = mat.clone();
    loop {
        if cur.is_identity() {
            break;
        }
        // find i with cur^T alpha_i negative, i.e. cur^{-1} sends alpha_i to a
        // negative root; equivalently the char-action of cur^{-1}... Use:
        // l(s_i w) < l(w) iff w^{-1}(alpha_i) < 0. Char action of cur^{-1} is
        // (cur)^T on X^* (since char action of g is (g^{-1})^T).
        let ct = cur.transpose();
        let mut found = None;
        for i in 0..datum.ss_rank {
            let img = ct.apply_z(&datum.simple_roots.row(i));
            let idx = datum.root_index(&img).expect("Weyl matrix permutes roots");
            if !datum.roots[idx].is_positive() {
                found = Some(i);
                break;
            }
        }
        let i = found.expect("non-identity Weyl matrix has a descent");
        word_rev.push(i);
        cur = datum.simple_reflection_cochar(i).mul(&cur);
    }
    // mat = s_{word_rev[0]} . s_{word_rev[1]} ... reading successive strips
    let word = word_rev;
    let mut m = IntMatrix::identity(datum.rank);
    let mut mi = IntMatrix::identity(datum.rank);
    for &i in &word {
        let s = datum.simple_reflection_cochar(i);
        m = m.mul(&s);
        mi = s.mul(&mi);
    }
    debug_assert_eq!(&m, mat);
    WeylElt { word, mat: m, mat_inv: mi }
}

/// Build a Weyl element from a word (reduces it via the matrix).
pub fn weyl_from_word(datum: &BasedRootDatum, word: &[usize]) -> WeylElt {
    let mut m = IntMatrix::identity(datum.rank);
    for &i in word {
        m = m.mul(&datum.simple_reflection_cochar(i));
    }
    reduced_word(datum, &m)
}

/// Multiply two Weyl elements (result carries a reduced word).
pub fn weyl_mul(datum: &BasedRootDatum, a: &WeylElt, b: &WeylElt) -> WeylElt {
    reduced_word(datum, &a.mat.mul(&b.mat))
}

/// Enumerate the full Weyl group by breadth-first search from the identity.
/// Returns elements with reduced words, sorted by (length, word).
pub fn enumerate_weyl(datum: &BasedRootDatum) -> Vec<WeylElt> {
    let mut seen: HashMap<Vec<Z>, WeylElt> = HashMap::new();
    let key = |m: &IntMatrix| -> Vec<Z> { m.entries_row_major() };
    let id = WeylElt::identity(datum.rank);
    seen.insert(key(&id.mat), id.clone());
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for i in 0..datum.ss_rank {
                let s = datum.simple_reflection_cochar(i);
                let m = w.mat.mul(&s);
                let k = key(&m);
                if !seen.contains_key(&k) {
                    let mut word = w.word.clone();
                    word.push(i);
                    let si = datum.simple_reflection_cochar(i);
                    let elt = WeylElt { word, mat: m, mat_inv: si.mul(&w.mat_inv) };
                    seen.insert(k, elt.clone());
                    next.push(elt);
                }
            }
        }
        frontier = next;
    }
    let mut all: Vec<WeylElt> = seen.into_values().collect();
    all.sort_by(|a, b| (a.length(), &a.word).cmp(&(b.length(), &b.word)));
    all
}

// ---------------------------------------------------------------------------
// Twisted involutions
// ---------------------------------------------------------------------------

/// A `gamma`-twisted involution: `w` with `w . gamma(w) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedInvolution {
    pub w: WeylElt,
}

/// Apply `gamma` to a Weyl element: conjugate the matrix, re-derive the word.
pub fn gamma_twist(ic: &InnerClass, w: &WeylElt) -> WeylElt {
    let m = ic.gamma.mul(&w.mat).mul(&ic.gamma);
    reduced_word(&ic.datum, &m)
}

/// All `gamma`-twisted involutions, sorted by (length, word).
pub fn twisted_involutions(ic: &InnerClass) -> Vec<TwistedInvolution> {
    enumerate_weyl(&ic.datum)
        .into_iter()
        .filter(|w| {
            let tw = ic.gamma.mul(&w.mat).mul(&ic.gamma);
            w.mat.mul(&tw).is_identity()
        })
        .map(|w| TwistedInvolution { w })
        .collect()
}

/// The torus involution `tau = w . gamma` attached to a twisted involution
/// (action on `X_*`).
pub fn involution_of(ic: &InnerClass, ti: &TwistedInvolution) -> Involution {
    Involution { mat: ti.w.mat.mul(&ic.gamma) }
}

/// Twisted conjugation: `w_tau -> g . w_tau . gamma(g)^{-1}`.
pub fn conjugate_twisted(ic: &InnerClass, g: &WeylElt, ti: &TwistedInvolution) -> TwistedInvolution {
    let tg = gamma_twist(ic, g);
    let m = g.mat.mul(&ti.w.mat).mul(&tg.mat_inv);
    TwistedInvolution { w: reduced_word(&ic.datum, &m) }
}

// ---------------------------------------------------------------------------
// Tits-group elements
// ---------------------------------------------------------------------------

/// An element `e(t) . sigma_w . xi^f` of the extended Tits group.
/// The exponent `t` is a rational cocharacter stored mod `X_*` (entries in
/// `[0,1)` after normalization).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TitsElement {
    pub t: CochVec,
    pub w: WeylElt,
    pub flag: bool,
}

impl TitsElement {
    pub fn torus(t: CochVec) -> Self {
        let rank = t.dim();
        TitsElement { t: t.mod1(), w: WeylElt::identity(rank), flag: false }
    }

    pub fn normalize(mut self) -> Self {
        self.t = self.t.mod1();
        self
    }
}

/// Context for Tits arithmetic in a fixed inner class.
pub struct TitsGroup<'a> {
    pub ic: &'a InnerClass,
}

impl<'a> TitsGroup<'a> {
    pub fn new(ic: &'a InnerClass) -> Self {
        TitsGroup { ic }
    }

    fn datum(&self) -> &BasedRootDatum {
        &self.ic.datum
    }

    /// `m_i = e(alpha_check_i / 2) = sigma_i^2`.
    pub fn m_simple(&self, i: usize) -> CochVec {
        CochVec::from_z(&self.datum().simple_coroots.row(i)).scale(&qr(1, 2))
    }

    /// Apply the automorphism `w . gamma^f` to a torus exponent.
    fn act_exponent(&self, w: &WeylElt, f: bool, t: &CochVec) -> CochVec {
        let t = if f { self.ic.gamma.apply(t) } else { t.clone() };
        w.mat.apply(&t)
    }

    /// Cocycle correction for `sigma_{w1} . sigma_{w2}`: with `w1` reduced as
    /// `s_{i_1} ... s_{i_k}`, multiply the letters onto `sigma_{w2}` from the
    /// right-hand end of the word; each length drop contributes a transported
    /// `m` factor. Returns `(t, w)` with
    /// `sigma_{w1} sigma_{w2} = e(t) sigma_w`.
    pub fn sigma_mul(&self, w1: &WeylElt, w2: &WeylElt) -> (CochVec, WeylElt) {
        // invariant: sigma_{letters consumed so far} . sigma_{w2} = e(t) sigma_cur;
        // a new left letter j gives
        //   sigma_j e(t) sigma_cur = e(s_j t) sigma_j sigma_cur,
        // and sigma_j sigma_cur picks up m_j exactly when the length drops.
        let datum = self.datum();
        let mut t = CochVec::zero(datum.rank);
        let mut cur = w2.clone();
        for &i in w1.word.iter().rev() {
            let s = datum.simple_reflection_cochar(i);
            // sigma_i . e(t) sigma_cur = e(s_i t) . sigma_i sigma_cur
            t = s.apply(&t);
            let prod = s.mul(&cur.mat);
            let prod_elt = reduced_word(datum, &prod);
            if prod_elt.length() != cur.length() + 1 {
                t = t.add(&self.m_simple(i));
            }
            cur = prod_elt;
        }
        (t.mod1(), cur)
    }

    /// Full product of two Tits elements.
    pub fn mul(&self, a: &TitsElement, b: &TitsElement) -> TitsElement {
        // a = e(t1) sigma_{w1} xi^{f1}, b = e(t2) sigma_{w2} xi^{f2}
        // xi^{f1} e(t2) = e(gamma^{f1} t2) xi^{f1}
        // xi^{f1} sigma_{w2} = sigma_{gamma^{f1}(w2)} xi^{f1}
        let w2t = if a.flag { gamma_twist(self.ic, &b.w) } else { b.w.clone() };
        let t2t = self.act_exponent(&a.w, a.flag, &b.t);
        let (tc, w) = self.sigma_mul(&a.w, &w2t);
        let t = a.t.add(&t2t).add(&tc).mod1();
        TitsElement { t, w, flag: a.flag ^ b.flag }
    }

    /// `sigma_i` as a Tits element.
    pub fn sigma_simple(&self, i: usize) -> TitsElement {
        let datum = self.datum();
        let s = datum.simple_reflection_cochar(i);
        TitsElement {
            t: CochVec::zero(datum.rank),
            w: WeylElt { word: vec![i], mat: s.clone(), mat_inv: s },
            flag: false,
        }
    }

    /// `sigma_i^{-1} = e(-alpha_check_i/2) sigma_i`.
    pub fn sigma_simple_inv(&self, i: usize) -> TitsElement {
        let mut e = self.sigma_simple(i);
        e.t = self.m_simple(i).neg().mod1();
        e
    }

    /// Canonical lift `sigma_w` of a Weyl element (torus part zero).
    pub fn sigma(&self, w: &WeylElt) -> TitsElement {
        TitsElement { t: CochVec::zero(self.datum().rank), w: w.clone(), flag: false }
    }

    /// The pinned automorphism lift `xi` (torus part zero, identity Weyl part).
    pub fn xi(&self) -> TitsElement {
        TitsElement { t: CochVec::zero(self.datum().rank), w: WeylElt::identity(self.datum().rank), flag: true }
    }

    pub fn e(&self, t: CochVec) -> TitsElement {
        TitsElement::torus(t)
    }

    /// Inverse of a Tits element.
    pub fn inverse(&self, a: &TitsElement) -> TitsElement {
        // (e(t) sigma_w xi^f)^{-1} = xi^{-f} sigma_w^{-1} e(-t)
        // sigma_w^{-1} = e(c) sigma_{w^{-1}} for the cocycle c with
        // sigma_w sigma_{w^{-1}} = e(-c') ... compute via sigma_mul:
        // sigma_{w^{-1}} sigma_w = e(c) => sigma_w^{-1} = e(?) — easiest:
        // find d with sigma_{w^{-1}} sigma_w = e(d) sigma_1; then
        // sigma_w^{-1} = e(-d)... careful: sigma_{w^{-1}} sigma_w = e(d)
        // => sigma_w^{-1} = e(d)^{-1} sigma_{w^{-1}} = e(-d) sigma_{w^{-1}}.
        let winv = a.w.inverse();
        let (d, one) = self.sigma_mul(&winv, &a.w);
        debug_assert!(one.is_identity());
        let s_inv = TitsElement { t: d.neg().mod1(), w: winv, flag: false };
        // xi^{-f} = xi^f (xi^2 = 1)
        let part = self.mul(&s_inv, &self.e(a.t.neg().mod1()));
        if a.flag {
            self.mul(&self.xi(), &part)
        } else {
            part
        }
    }

    /// Conjugation `g a g^{-1}`.
    pub fn conj(&self, g: &TitsElement, a: &TitsElement) -> TitsElement {
        self.mul(&self.mul(g, a), &self.inverse(g))
    }
}

// ---------------------------------------------------------------------------
// Adjoint signs
// ---------------------------------------------------------------------------

/// Write a root as `w(alpha_i)` with `alpha_i` simple: returns `(w, i)`.
pub fn express_as_simple(datum: &BasedRootDatum, alpha: usize) -> (WeylElt, usize) {
    // if alpha negative, use w0-free trick: reflect to positive first via a
    // simple reflection chain; standard algorithm: while alpha not simple,
    // pick simple i with <alpha, coroot_i> > 0 if alpha positive (exists),
    // and replace alpha by s_i alpha; for negative alpha negate handling:
    // pick i with pairing < 0.
    let mut cur = alpha;
    let mut letters: Vec<usize> = Vec::new(); // w = s_{letters[0]} s_{letters[1]} ...
    loop {
        if let Some(i) = datum.as_simple(cur) {
            let w = weyl_from_word(datum, &letters);
            return (w, i);
        }
        let positive = datum.roots[cur].is_positive();
        let mut found = None;
        for i in 0..datum.ss_rank {
            if datum.simple_index(i) == cur || datum.negative_of(datum.simple_index(i)) == cur {
                continue;
            }
            let p = datum.roots[cur].char_vec().pair(&CochVec::from_z(&datum.simple_coroots.row(i)));
            if (positive && p.is_positive()) || (!positive && p.is_negative()) {
                found = Some(i);
                break;
            }
        }
        let i = match found {
            Some(i) => i,
            None => {
                // cur is the negative of a simple root: s_i(-alpha_i) = alpha_i
                let pos = datum.negative_of(cur);
                let i = datum.as_simple(pos).expect("dead end only at negative simple");
                let s = datum.simple_reflection_cochar(i);
                let nxt = datum.act_on_root(&s, cur).unwrap();
                letters.push(i);
                let w = weyl_from_word(datum, &letters);
                let j = datum.as_simple(nxt).unwrap();
                return (w, j);
            }
        };
        letters.push(i);
        let s = datum.simple_reflection_cochar(i);
        cur = datum.act_on_root(&s, cur).unwrap();
    }
}

#[cfg(test)]
mod unit {
    use super::*;
    use crate::rootdata::{build_datum, Isogeny};

    #[test]
    fn weyl_orders() {
        for (spec, iso, order) in [
            ("A1", Isogeny::SimplyConnected, 2),
            ("A2", Isogeny::SimplyConnected, 6),
            ("B2", Isogeny::SimplyConnected, 8),
            ("G2", Isogeny::SimplyConnected, 12),
            ("A1.A1", Isogeny::Adjoint, 4),
        ] {
            let d = build_datum(spec, iso).unwrap();
            assert_eq!(enumerate_weyl(&d).len(), order, "{spec}");
        }
    }

    #[test]
    fn sigma_squared_is_m() {
        // sigma_i^2 = e(coroot_i / 2) in every corpus datum
        for spec in ["A2", "B2", "G2"] {
            let d = build_datum(spec, Isogeny::SimplyConnected).unwrap();
            let ic = crate::rootdata::InnerClass::new(d, IntMatrix::identity(2)).unwrap();
            let tg = TitsGroup::new(&ic);
            for i in 0..2 {
                let s = tg.sigma_simple(i);
                let sq = tg.mul(&s, &s);
                assert!(sq.w.is_identity());
                assert_eq!(sq.t, tg.m_simple(i).mod1(), "{spec} / {i}");
            }
        }
    }
}
