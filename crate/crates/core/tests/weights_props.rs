use osinv_core::density::Density;
use osinv_core::monotone_fn::{fit_loglog_slope, MonotoneFn};
use osinv_core::weights::{WeightDomain, WeightPair};
use proptest::prelude::*;

fn discrete_pairs() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..12).prop_flat_map(|n| {
        (prop::collection::vec(1e-3f64..10.0, n), prop::collection::vec(1e-3f64..10.0, n))
    })
}

fn unit_against_inverse_square() -> WeightPair {
    let one = Density::steps(&[1.0, f64::INFINITY], &[1.0]).unwrap();
    let tail = Density::from_monotone(&MonotoneFn::power(-2.0).unwrap()).pieces()[1..].to_vec();
    WeightPair::lebesgue(one, Density::new(tail).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn norm_factor_below_weight_condition((c, r) in discrete_pairs()) {
        let p = WeightPair::discrete(c, r).unwrap();
        prop_assert!(p.k_norm_factor().unwrap() <= p.check_weight_condition().unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn continuize_preserves_min_mass((c, r) in discrete_pairs()) {
        let p = WeightPair::discrete(c, r).unwrap();
        let q = p.continuize().unwrap();
        let (a, b) = (p.check_weight_condition().unwrap(), q.check_weight_condition().unwrap());
        prop_assert!((a / b - 1.0).abs() < 1e-12);
        let back = q.discretize(2.0).unwrap();
        prop_assert!(back.check_weight_condition().unwrap() <= b * (1.0 + 1e-12));
    }

    #[test]
    fn dropping_indices_moves_norm_factor_boundedly((c, r) in discrete_pairs(), mask in prop::collection::vec(any::<bool>(), 12)) {
        let keep: Vec<usize> = (0..c.len()).filter(|&i| !mask[i]).collect();
        prop_assume!(!keep.is_empty() && keep.len() < c.len());
        let full = WeightPair::discrete(c.clone(), r.clone()).unwrap().k_norm_factor().unwrap();
        let kept = WeightPair::discrete(keep.iter().map(|&i| c[i]).collect(), keep.iter().map(|&i| r[i]).collect())
            .unwrap()
            .k_norm_factor()
            .unwrap();
        let dropped: Vec<usize> = (0..c.len()).filter(|&i| mask[i]).collect();
        let (mc, mr): (f64, f64) = (dropped.iter().map(|&i| c[i]).sum(), dropped.iter().map(|&i| r[i]).sum());
        prop_assert!(full - kept <= mc.min(mr) * (1.0 + 1e-12) && full >= kept);
    }
}

#[test]
fn normalized_pair_has_bounded_weight_condition() {
    let n = unit_against_inverse_square().normalize().unwrap();
    assert!(n.is_normalized());
    assert!(n.check_weight_condition().unwrap() <= 2.0 + 1e-12);
}

#[test]
fn normalized_row_weight_keeps_inverse_square_tail() {
    let n = unit_against_inverse_square().normalize().unwrap();
    let (_, wr) = n.half_line_parts().unwrap();
    let pts: Vec<(f64, f64)> = osinv_core::grid::log_grid(10.0, 1e6, 8).iter().map(|&s| (s, wr.evaluate(s))).collect();
    let (slope, _) = fit_loglog_slope(&pts).unwrap();
    assert!((slope + 2.0).abs() <= 0.1, "slope {slope}");
}

#[test]
fn discrete_geometric_examples() {
    let n = 60;
    let p = WeightPair::discrete(vec![1.0; n], (1..=n).map(|j| 0.5f64.powi(j as i32)).collect()).unwrap();
    assert!((p.check_weight_condition().unwrap() - 1.0).abs() < 1e-12);
    let mu = p.k_norm_factor().unwrap();
    let oracle: f64 = (1..200).map(|j| { let x = 0.5f64.powi(j); x / (1.0 + x) }).sum();
    assert!((mu - oracle).abs() < 1e-10);
    let WeightDomain::Discrete { col, .. } = p.continuize().unwrap().discretize(2.0).unwrap().domain().clone() else {
        panic!("discrete output expected")
    };
    assert_eq!(col.len(), n);
}
