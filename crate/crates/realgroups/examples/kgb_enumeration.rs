//! Enumerate the space of strong involutions (the "KGB space") of an inner
//! class and print its structure: one row per element with its twisted
//! involution, torus coordinates, central square, the compact/noncompact
//! grading of the simple roots, and the cross-action and Cayley-transform
//! tables.
//!
//! Usage: `cargo run --example kgb_enumeration [TYPE [sc|ad [c|s]]]`,
//! defaulting to the simply connected group of type B2 in its equal-rank
//! inner class.

use std::collections::BTreeMap;

use realgroups::kgb::KgbContext;
use realgroups::rootdata::{build_datum, InnerClass, InnerClassSpec, Isogeny, RootType};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let group = args.get(1).map(String::as_str).unwrap_or("B2");
    let isogeny = match args.get(2).map(String::as_str).unwrap_or("sc") {
        "ad" => Isogeny::Adjoint,
        _ => Isogeny::SimplyConnected,
    };
    let inner = match args.get(3).map(String::as_str).unwrap_or("c") {
        "s" => InnerClassSpec::Split,
        _ => InnerClassSpec::Compact,
    };

    let datum = build_datum(group, isogeny).expect("group type");
    let ic = InnerClass::from_spec(datum, &inner).expect("inner class");
    let kgb = KgbContext::new(&ic).expect("finite fibers");
    let all = kgb.enumerate();
    let ids: BTreeMap<_, usize> = all.iter().cloned().zip(0..).collect();

    println!("KGB space of {} ({} elements, {} fibers)", group, all.len(), kgb.tw_invs.len());
    println!();
    println!("{:>4}  {:<10} {:<18} {:<12} {:<8} {:<12} Cayley", "id", "tw-inv", "torus part", "square", "status", "cross");

    for x in &all {
        let word: Vec<String> = kgb.tw_invs[x.ti].w.word.iter().map(|i| i.to_string()).collect();
        let torus: Vec<String> = x.t.iter().map(|q| q.to_string()).collect();
        let z: Vec<String> = kgb.square(x).entries().iter().map(|q| q.to_string()).collect();
        let mut status = String::new();
        let mut crosses = Vec::new();
        let mut cayleys = Vec::new();
        for k in 0..kgb.datum().ss_rank {
            let alpha = kgb.datum().simple_index(k);
            status.push(match kgb.root_type(x, alpha) {
                RootType::Complex => 'C',
                RootType::Real => 'r',
                RootType::Imaginary => {
                    if kgb.is_compact(x, alpha).unwrap() {
                        'c'
                    } else {
                        'n'
                    }
                }
            });
            crosses.push(ids[&kgb.cross(k, x)].to_string());
            cayleys.push(match kgb.cayley_up_simple(k, x) {
                Ok(up) => ids[&up].to_string(),
                Err(_) => "-".to_string(),
            });
        }
        println!(
            "{:>4}  {:<10} {:<18} {:<12} {:<8} {:<12} {}",
            ids[x],
            format!("[{}]", word.join(",")),
            format!("({})", torus.join(",")),
            format!("({})", z.join(",")),
            status,
            crosses.join(","),
            cayleys.join(",")
        );
    }

    println!();
    println!("fiber sizes by twisted involution:");
    for ti in 0..kgb.tw_invs.len() {
        let fiber = kgb.fiber_of(&all, ti);
        let word: Vec<String> = kgb.tw_invs[ti].w.word.iter().map(|i| i.to_string()).collect();
        println!("  [{}] -> {} elements", word.join(","), fiber.len());
    }
}
