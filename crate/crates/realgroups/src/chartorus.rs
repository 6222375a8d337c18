//! Finite character-group combinatorics of a Cartan fiber: the fiber group
//! `U_tau` acting simply transitively on the KGB fiber over `tau`, the
//! coordinate map `D_tau` relative to the fiber basepoint, the order-two
//! characters `alpha_bar` attached to imaginary roots, the distinguished
//! elements `m_bar_alpha`, and the transport maps between fiber groups
//! induced by Cayley transforms and complex cross actions.

use crate::kgb::{KgbContext, KgbElt, KgbError};
use crate::lattice::*;
use crate::rootdata::{Involution, RootType};
use num::Zero;

/// The fiber group `U_tau` attached to twisted involution `ti`.
pub fn u_tau<'a>(ctx: &'a KgbContext, ti: usize) -> &'a FiniteAbelianGroup {
    ctx.fiber_group(ti)
}

/// The identity-component subgroup `U0_tau` (classes of half the integral
/// (+1)-eigenlattice), as a sorted list of normal-form elements.
pub fn u0_subgroup(ctx: &KgbContext, ti: usize) -> Vec<Vec<Z>> {
    let g = ctx.fiber_group(ti);
    let n = ctx.datum().rank;
    let half = qr(1, 2);
    let mut gens: Vec<Vec<Z>> = Vec::new();
    for col in ctx.plus_basis(ti) {
        let v: Vec<Q> = (0..n).map(|r| Q::from_integer(col[r].clone()) * &half).collect();
        gens.push(g.to_normal(&v).expect("half eigenlattice lies in the fiber lattice"));
    }
    subgroup_closure(g, &gens)
}

/// Closure of a generating set inside a finite abelian group, sorted.
pub fn subgroup_closure(g: &FiniteAbelianGroup, gens: &[Vec<Z>]) -> Vec<Vec<Z>> {
    let mut out = vec![g.zero_el()];
    let mut frontier = out.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for e in &frontier {
            for gen in gens {
                let s = g.add(e, gen);
                if !out.contains(&s) {
                    out.push(s.clone());
                    next.push(s);
                }
            }
        }
        frontier = next;
    }
    out.sort();
    out
}

/// Action of `u` in `U_tau` on a KGB element of the same fiber: translate
/// the torus exponent by a representative of `u`.
pub fn act(ctx: &KgbContext, u: &[Z], x: &KgbElt) -> KgbElt {
    let g = ctx.fiber_group(x.ti);
    let mut offset = g.rep(u);
    // a trivial fiber group has ambient dimension 0; its only offset is 0
    offset.resize(x.t.len(), Q::zero());
    let t: Vec<Q> = x.t.iter().zip(&offset).map(|(a, b)| a + b).collect();
    KgbElt { ti: x.ti, t: ctx.reduce_exponent(x.ti, &t) }
}

/// Coordinates of `x` in its fiber, relative to the fiber basepoint:
/// the unique `u` with `x = act(u, basepoint_of(ti))`.
pub fn d_tau(ctx: &KgbContext, x: &KgbElt) -> Vec<Z> {
    let b = ctx.basepoint_of(x.ti);
    let diff: Vec<Q> = x.t.iter().zip(&b.t).map(|(a, c)| a - c).collect();
    ctx.fiber_group(x.ti)
        .to_normal(&diff)
        .expect("fiber difference lies in the fiber group lattice")
}

/// Inverse of `d_tau`: the fiber element with the given coordinates.
pub fn d_tau_inv(ctx: &KgbContext, ti: usize, u: &[Z]) -> KgbElt {
    act(ctx, u, &ctx.basepoint_of(ti))
}

/// The order-(at most)-two character `alpha_bar` of `U_tau` attached to a
/// `tau`-imaginary root: `u -> e^{2 pi i <alpha, t_u>}`.
pub fn alpha_bar(ctx: &KgbContext, ti: usize, alpha: usize) -> Result<GroupCharacter, KgbError> {
    let inv = involution_of_ti(ctx, ti);
    if inv.classify_root(ctx.datum(), alpha) != RootType::Imaginary {
        return Err(KgbError::WrongRootType("alpha_bar needs an imaginary root".into()));
    }
    let g = ctx.fiber_group(ti);
    let factors = g.factors_full().to_vec();
    let a = ctx.datum().roots[alpha].char_vec();
    let mut value = Vec::with_capacity(factors.len());
    for (i, d) in factors.iter().enumerate() {
        let mut e = vec![Z::zero(); factors.len()];
        e[i] = Z::from(1);
        let p = a.pair(&CochVec::new(g.rep(&e)));
        // v_i / d_i must equal p mod 1, with p in (1/2) Z
        let v = p * Q::from_integer(d.clone());
        assert!(q_is_int(&v), "imaginary-root character must factor through the fiber group");
        value.push(num::integer::mod_floor(v.to_integer(), d.clone()));
    }
    Ok(GroupCharacter { factors, value })
}

/// The kernel `V_{tau,alpha}` of `alpha_bar`, as a sorted element list.
pub fn v_subgroup(ctx: &KgbContext, ti: usize, alpha: usize) -> Result<Vec<Vec<Z>>, KgbError> {
    let chi = alpha_bar(ctx, ti, alpha)?;
    let g = ctx.fiber_group(ti);
    Ok(g.elements().into_iter().filter(|e| chi.eval(e).is_zero()).collect())
}

/// The element `m_bar_alpha` of `U_tau`: the class of `coroot(alpha)/2`.
pub fn m_bar(ctx: &KgbContext, ti: usize, alpha: usize) -> Result<Vec<Z>, KgbError> {
    let inv = involution_of_ti(ctx, ti);
    if inv.classify_root(ctx.datum(), alpha) != RootType::Imaginary {
        return Err(KgbError::WrongRootType("m_bar needs an imaginary root".into()));
    }
    let g = ctx.fiber_group(ti);
    let half = qr(1, 2);
    let v: Vec<Q> = ctx.datum().roots[alpha]
        .coroot
        .iter()
        .map(|c| Q::from_integer(c.clone()) * &half)
        .collect();
    g.to_normal(&v)
        .ok_or_else(|| KgbError::Other("half coroot not in the fiber group lattice".into()))
}

fn involution_of_ti<'a>(ctx: &'a KgbContext, ti: usize) -> &'a Involution {
    // any element of the fiber has this involution; reuse the cached one
    ctx.involution(&KgbElt { ti, t: Vec::new() })
}

/// Reinterpret a torus exponent as a fiber-group element at a (possibly)
/// different involution: torus-conjugation-normalize and take coordinates.
fn reinterpret(ctx: &KgbContext, ti_to: usize, t: &[Q]) -> Result<Vec<Z>, KgbError> {
    let inv = involution_of_ti(ctx, ti_to);
    let n = ctx.datum().rank;
    let half = qr(1, 2);
    let tt = inv.mat.apply_q(t);
    let proj: Vec<Q> = (0..n).map(|r| (&t[r] + &tt[r]) * &half).collect();
    let red = ctx.reduce_exponent(ti_to, &proj);
    ctx.fiber_group(ti_to)
        .to_normal(&red)
        .ok_or_else(|| KgbError::Other("exponent does not define a fiber-group class".into()))
}

/// The twisted-involution index of `s_alpha tau` for a `tau`-imaginary root
/// (the involution on the other side of the Cayley transform through
/// `alpha`).
pub fn cayley_target_ti(ctx: &KgbContext, ti: usize, alpha: usize) -> Result<usize, KgbError> {
    let inv = involution_of_ti(ctx, ti);
    if inv.classify_root(ctx.datum(), alpha) != RootType::Imaginary {
        return Err(KgbError::WrongRootType("Cayley needs an imaginary root".into()));
    }
    let m = ctx.datum().reflection_cochar(alpha).mul(&inv.mat);
    let target = Involution { mat: m };
    ctx.ti_of_involution(&target)
        .ok_or_else(|| KgbError::Other("Cayley image involution not found".into()))
}

/// The character-group transport `lambda_alpha` along a Cayley transform
/// through a `tau`-imaginary root `alpha`: defined on the kernel of
/// `alpha_bar`, with values in `U_{s_alpha tau}`; its kernel is generated by
/// `m_bar_alpha`. Returns `(target ti, image element)`.
pub fn cayley_char_map(
    ctx: &KgbContext,
    ti: usize,
    alpha: usize,
    u: &[Z],
) -> Result<(usize, Vec<Z>), KgbError> {
    let chi = alpha_bar(ctx, ti, alpha)?;
    if !chi.eval(u).is_zero() {
        return Err(KgbError::WrongRootType(
            "lambda_alpha is defined on the kernel of alpha_bar".into(),
        ));
    }
    let ti2 = cayley_target_ti(ctx, ti, alpha)?;
    let mut t = ctx.fiber_group(ti).rep(u);
    t.resize(ctx.datum().rank, Q::zero());
    Ok((ti2, reinterpret(ctx, ti2, &t)?))
}

/// A section of `lambda_alpha`: the lexicographically least preimage in the
/// kernel of `alpha_bar` of a given element of `U_{s_alpha tau}`.
pub fn cayley_char_section(
    ctx: &KgbContext,
    ti: usize,
    alpha: usize,
    target: &[Z],
) -> Result<Vec<Z>, KgbError> {
    for u in v_subgroup(ctx, ti, alpha)? {
        let (_, img) = cayley_char_map(ctx, ti, alpha, &u)?;
        if img == target {
            return Ok(u);
        }
    }
    Err(KgbError::Other("element has no preimage under lambda_alpha".into()))
}

/// The character-group transport along the cross action of an arbitrary-root
/// reflection: the isomorphism `U_tau -> U_{s_alpha tau s_alpha}`,
/// `t -> s_alpha t`. For imaginary and real roots the target fiber equals
/// the source fiber. Returns `(target ti, image)`.
pub fn reflect_char_map(
    ctx: &KgbContext,
    ti: usize,
    alpha: usize,
    u: &[Z],
) -> Result<(usize, Vec<Z>), KgbError> {
    let datum = ctx.datum();
    let inv = involution_of_ti(ctx, ti);
    let s = datum.reflection_cochar(alpha);
    let m = s.mul(&inv.mat).mul(&s);
    let ti2 = ctx
        .ti_of_involution(&Involution { mat: m })
        .ok_or_else(|| KgbError::Other("cross image involution not found".into()))?;
    let mut t = ctx.fiber_group(ti).rep(u);
    t.resize(datum.rank, Q::zero());
    let st = s.apply_q(&t);
    Ok((ti2, reinterpret(ctx, ti2, &st)?))
}

/// The character-group transport along a complex simple cross action (the
/// simple-root special case of `reflect_char_map`, with the root type
/// checked).
pub fn cross_char_map(
    ctx: &KgbContext,
    ti: usize,
    i: usize,
    u: &[Z],
) -> Result<(usize, Vec<Z>), KgbError> {
    let datum = ctx.datum();
    let inv = involution_of_ti(ctx, ti);
    let alpha = datum.simple_index(i);
    if inv.classify_root(datum, alpha) != RootType::Complex {
        return Err(KgbError::WrongRootType("cross transport needs a complex simple root".into()));
    }
    reflect_char_map(ctx, ti, alpha, u)
}

/// The reflection action of an imaginary root on its own fiber group:
/// identity on the kernel of `alpha_bar`, translation by `m_bar_alpha`
/// off it.
pub fn s_alpha_on_u(ctx: &KgbContext, ti: usize, alpha: usize, u: &[Z]) -> Result<Vec<Z>, KgbError> {
    let chi = alpha_bar(ctx, ti, alpha)?;
    if chi.eval(u).is_zero() {
        Ok(u.to_vec())
    } else {
        let m = m_bar(ctx, ti, alpha)?;
        Ok(ctx.fiber_group(ti).add(u, &m))
    }
}

#[cfg(test)]
mod unit {
    use super::*;
    use crate::kgb::KgbContext;
    use crate::rootdata::{build_datum, InnerClass, InnerClassSpec, Isogeny};

    fn sl2() -> InnerClass {
        let d = build_datum("A1", Isogeny::SimplyConnected).unwrap();
        InnerClass::from_spec(d, &InnerClassSpec::Compact).unwrap()
    }

    #[test]
    fn sl2_fiber_group_and_coordinates() {
        let ic = sl2();
        let ctx = KgbContext::new(&ic).unwrap();
        let all = ctx.enumerate();
        for ti in 0..ctx.tw_invs.len() {
            let fiber = ctx.fiber_of(&all, ti);
            let g = ctx.fiber_group(ti);
            assert_eq!(Z::from(fiber.len() as u64), g.order());
            // d_tau is a bijection onto the group, basepoint -> 0
            let mut coords: Vec<Vec<Z>> = fiber.iter().map(|x| d_tau(&ctx, x)).collect();
            coords.sort();
            coords.dedup();
            assert_eq!(coords.len(), fiber.len());
            assert_eq!(d_tau(&ctx, &ctx.basepoint_of(ti)), g.zero_el());
            for x in &fiber {
                assert_eq!(d_tau_inv(&ctx, ti, &d_tau(&ctx, x)), *x);
            }
        }
    }

    #[test]
    fn sl2_alpha_bar_m_bar_and_cayley_transport() {
        let ic = sl2();
        let ctx = KgbContext::new(&ic).unwrap();
        let b = ctx.basepoint();
        let ti0 = b.ti;
        let g = ctx.fiber_group(ti0);
        assert_eq!(g.factors(), vec![Z::from(4)]);
        let alpha = ctx.datum().simple_index(0);
        // alpha_bar has kernel of index 2; m_bar has order 2 and lies in it
        let v = v_subgroup(&ctx, ti0, alpha).unwrap();
        assert_eq!(v.len(), 2);
        let m = m_bar(&ctx, ti0, alpha).unwrap();
        assert_ne!(m, g.zero_el());
        assert_eq!(g.add(&m, &m), g.zero_el());
        assert!(v.contains(&m));
        // lambda_alpha maps the kernel onto the (trivial) split fiber group,
        // with kernel generated by m_bar
        for u in &v {
            let (ti2, img) = cayley_char_map(&ctx, ti0, alpha, u).unwrap();
            assert!(ctx.fiber_group(ti2).is_trivial() || img == ctx.fiber_group(ti2).zero_el());
        }
    }

    #[test]
    fn pgl2_m_bar_trivial() {
        let d = build_datum("A1", Isogeny::Adjoint).unwrap();
        let ic = InnerClass::from_spec(d, &InnerClassSpec::Compact).unwrap();
        let ctx = KgbContext::new(&ic).unwrap();
        let b = ctx.basepoint();
        let alpha = ctx.datum().simple_index(0);
        let g = ctx.fiber_group(b.ti);
        assert_eq!(g.factors(), vec![Z::from(2)]);
        // half the coroot is a cocharacter, so m_bar vanishes and alpha_bar
        // is nontrivial (its kernel is the trivial subgroup)
        assert_eq!(m_bar(&ctx, b.ti, alpha).unwrap(), g.zero_el());
        assert_eq!(v_subgroup(&ctx, b.ti, alpha).unwrap().len(), 1);
    }

    #[test]
    fn cayley_transport_commutes_with_d_tau() {
        // criterion: lambda_alpha . D_tau = D_tau' . c^alpha on the
        // noncompact locus, checked here for the rank-one cases
        for iso in [Isogeny::SimplyConnected, Isogeny::Adjoint] {
            let d = build_datum("A1", iso).unwrap();
            let ic = InnerClass::from_spec(d, &InnerClassSpec::Compact).unwrap();
            let ctx = KgbContext::new(&ic).unwrap();
            let all = ctx.enumerate();
            let alpha = ctx.datum().simple_index(0);
            for x in &all {
                if ctx.root_type(x, alpha) != RootType::Imaginary
                    || ctx.is_compact(x, alpha).unwrap()
                {
                    continue;
                }
                let y = ctx.cayley_up(alpha, x).unwrap();
                let (ti2, img) = cayley_char_map(&ctx, x.ti, alpha, &d_tau(&ctx, x)).unwrap();
                assert_eq!(ti2, y.ti);
                assert_eq!(img, d_tau(&ctx, &y));
            }
        }
    }
}
