//! Regression pins: KGB totals and fiber-size profiles for every corpus
//! inner class. The rank-one and type-A2 equal-rank values are reproduced
//! independently by the monomial-matrix model in `oracle`; the rest were
//! computed once with this implementation and frozen to catch any drift.

use realgroups::kgb::KgbContext;
use realgroups::sampling;

#[test]
fn kgb_totals_and_fiber_sizes() {
    let expected: Vec<(&str, usize, Vec<usize>)> = vec![
        ("A1-sc-c", 5, vec![4, 1]),
        ("A1-ad-c", 3, vec![2, 1]),
        ("A1.A1-sc-c", 25, vec![16, 4, 4, 1]),
        ("A1.A1-sc-swap", 4, vec![2, 2]),
        ("A2-sc-c", 21, vec![12, 3, 3, 3]),
        ("A2-sc-s", 4, vec![1, 1, 1, 1]),
        ("A2-ad-c", 7, vec![4, 1, 1, 1]),
        ("A2-ad-s", 4, vec![1, 1, 1, 1]),
        ("B2-sc-c", 17, vec![8, 2, 2, 2, 2, 1]),
        ("G2-sc-c", 11, vec![4, 1, 1, 1, 1, 1, 1, 1]),
        ("A1.T1-sc-c", 6, vec![4, 2]),
        ("A1.T1-sc-s", 5, vec![4, 1]),
    ];
    let corpus = sampling::corpus();
    assert_eq!(corpus.len(), expected.len());
    for (e, (label, total, sizes)) in corpus.iter().zip(expected) {
        assert_eq!(e.label, label);
        let kgb = KgbContext::new(&e.ic).unwrap();
        let all = kgb.enumerate();
        assert_eq!(all.len(), total, "{} total", label);
        let got: Vec<usize> =
            (0..kgb.tw_invs.len()).map(|ti| kgb.fiber_of(&all, ti).len()).collect();
        assert_eq!(got, sizes, "{} fiber sizes", label);
    }
}

#[test]
fn product_group_is_a_product() {
    // the equal-rank product inner class multiplies factor counts
    let corpus = sampling::corpus();
    let single = corpus.iter().find(|e| e.label == "A1-sc-c").unwrap();
    let double = corpus.iter().find(|e| e.label == "A1.A1-sc-c").unwrap();
    let n1 = KgbContext::new(&single.ic).unwrap().enumerate().len();
    let n2 = KgbContext::new(&double.ic).unwrap().enumerate().len();
    assert_eq!(n2, n1 * n1);
}

#[test]
fn matrix_model_pins() {
    // the independent model reproduces the equal-rank special-linear rows
    use realgroups::oracle;
    assert_eq!(oracle::sl_classes(2).len(), 5);
    assert_eq!(oracle::sl_classes(3).len(), 21);
    assert_eq!(oracle::pgl2_classes().len(), 3);
    let corpus = sampling::corpus();
    for (label, n) in [("A1-sc-c", 2usize), ("A2-sc-c", 3)] {
        let e = corpus.iter().find(|e| e.label == label).unwrap();
        let kgb = KgbContext::new(&e.ic).unwrap();
        oracle::compare_sl(&kgb, n).unwrap();
    }
    let e = corpus.iter().find(|e| e.label == "A1-ad-c").unwrap();
    oracle::compare_pgl2(&KgbContext::new(&e.ic).unwrap()).unwrap();
}
