//! The torsor structure of a KGB fiber: every fiber over a twisted
//! involution carries a simply transitive action of a finite character
//! group, with a distinguished basepoint whose coordinate is trivial. This
//! example prints, for each fiber of the simply connected equal-rank A2
//! group, the fiber group, the coordinate of every element, and how a
//! Cayley transform along a noncompact simple root carries coordinates to
//! the neighboring fiber.

use realgroups::chartorus;
use realgroups::kgb::KgbContext;
use realgroups::rootdata::{build_datum, InnerClass, InnerClassSpec, Isogeny, RootType};

fn main() {
    let datum = build_datum("A2", Isogeny::SimplyConnected).unwrap();
    let ic = InnerClass::from_spec(datum, &InnerClassSpec::Compact).unwrap();
    let kgb = KgbContext::new(&ic).unwrap();
    let all = kgb.enumerate();

    for ti in 0..kgb.tw_invs.len() {
        let fiber = kgb.fiber_of(&all, ti);
        let word: Vec<String> = kgb.tw_invs[ti].w.word.iter().map(|i| i.to_string()).collect();
        println!("fiber over twisted involution [{}]:", word.join(","));
        let group = kgb.fiber_group(ti);
        println!("  character group has {} elements", group.order());
        let base = kgb.basepoint_of(ti);
        for x in &fiber {
            let u = chartorus::d_tau(&kgb, x);
            let tag = if *x == base { "  <- basepoint" } else { "" };
            let torus: Vec<String> = x.t.iter().map(|q| q.to_string()).collect();
            println!("  ({})  coordinate {:?}{}", torus.join(","), u, tag);
            // the coordinate map inverts exactly: the fiber is a torsor
            assert_eq!(chartorus::d_tau_inv(&kgb, ti, &u), *x);
        }
        println!();
    }

    // follow one Cayley transform and watch the coordinates move
    let base = kgb.basepoint_of(0);
    let alpha = kgb.datum().simple_index(0);
    assert_eq!(kgb.root_type(&base, alpha), RootType::Imaginary);
    if !kgb.is_compact(&base, alpha).unwrap() {
        let up = kgb.cayley_up_simple(0, &base).unwrap();
        println!(
            "Cayley transform along simple root 0 sends the fundamental basepoint to the fiber over [{}],",
            kgb.tw_invs[up.ti].w.word.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
        );
        println!(
            "landing on its basepoint: {} (basepoint coherence)",
            up == kgb.basepoint_of(up.ti)
        );
    }
}
