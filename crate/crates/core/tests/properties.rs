use proptest::prelude::*;

use thermalent::dynamics::{apply_schedule, lindblad_pair_evolve, lambda_for_time};
use thermalent::entangle::{thermal_witness, thermally_entanglable};
use thermalent::geometry::{ne_boundary_valid_roots, volume_of, SetId};
use thermalent::majorization::TAU_CMP;
use thermalent::*;

fn simplex(d: usize) -> impl Strategy<Value = PopVector> {
    prop::collection::vec(0.0f64..1.0, d).prop_filter_map("zero vector", |v| {
        let s: f64 = v.iter().sum();
        (s > 1e-6).then(|| PopVector::renormalized(v).unwrap())
    })
}

fn energies(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..3.0, d)
}

fn two_qubit(beta: f64) -> GibbsContext {
    GibbsContext::two_qubit(1.0, Beta::Finite(beta)).unwrap()
}

fn f(q: &[f64]) -> f64 {
    4.0 * q[0] * q[3] - (q[1] - q[2]).powi(2)
}

fn cumulative(q: &PopVector, gamma: &[f64], perm: &[usize]) -> Vec<(f64, f64)> {
    let mut pts = vec![(0.0, 0.0)];
    let (mut x, mut y) = (0.0, 0.0);
    for &i in perm {
        x += gamma[i];
        y += q[i];
        pts.push((x, y));
    }
    pts
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn beta_order_sorts_ratios(p in simplex(5), e in energies(5), beta in 0.0f64..4.0) {
        let ctx = make_context(e, Beta::Finite(beta)).unwrap();
        let order = beta_order(&p, &ctx).unwrap();
        let g = ctx.gamma();
        let r: Vec<f64> = order.as_slice().iter().map(|&i| p[i] / g[i]).collect();
        for w in r.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn beta_order_depends_on_product(p in simplex(4), beta in 0.0f64..4.0, scale in 0.1f64..10.0) {
        let a = GibbsContext::two_qubit(1.0, Beta::Finite(beta)).unwrap();
        let b = GibbsContext::two_qubit(scale, Beta::Finite(beta / scale)).unwrap();
        prop_assert_eq!(beta_order(&p, &a).unwrap(), beta_order(&p, &b).unwrap());
    }

    #[test]
    fn gibbs_normalized(e in energies(6), beta in 0.0f64..50.0) {
        let ctx = make_context(e, Beta::Finite(beta)).unwrap();
        prop_assert!((ctx.gamma().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn curve_is_concave_with_endpoints(p in simplex(4), e in energies(4), beta in 0.0f64..4.0) {
        let ctx = make_context(e, Beta::Finite(beta)).unwrap();
        let c = curve(&p, &ctx).unwrap();
        let el = c.elbows();
        prop_assert_eq!(el[0], (0.0, 0.0));
        let last = el[el.len() - 1];
        prop_assert!((last.0 - 1.0).abs() < 1e-12 && (last.1 - 1.0).abs() < 1e-12);
        let slopes: Vec<f64> = el.windows(2)
            .filter(|w| w[1].0 - w[0].0 > 1e-9)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect();
        for s in slopes.windows(2) {
            prop_assert!(s[0] >= s[1] - 1e-7 * s[0].abs().max(1.0));
        }
    }

    #[test]
    fn extreme_points_are_tight(p in simplex(4), beta in 0.0f64..4.0, k in 0usize..24) {
        let ctx = two_qubit(beta);
        let perm = itertools_perm(k);
        let target = BetaOrdering::new(perm.clone()).unwrap();
        let q = extreme_point(&p, &ctx, &target).unwrap();
        prop_assert!(thermo_majorizes(&p, &q, &ctx).unwrap());
        let lp = curve(&p, &ctx).unwrap();
        for (x, y) in cumulative(&q, ctx.gamma(), &perm) {
            prop_assert!((lp.evaluate(x.min(1.0)).unwrap() - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn majorization_is_transitive(p in simplex(4), beta in 0.0f64..3.0, w1 in 0.0f64..1.0, w2 in 0.0f64..1.0, k in 0usize..24, l in 0usize..24) {
        // q, r built inside the cones so the premises hold often
        let ctx = two_qubit(beta);
        let q = extreme_point(&p, &ctx, &BetaOrdering::new(itertools_perm(k)).unwrap()).unwrap().mix(&ctx.gibbs_state(), w1);
        let r = extreme_point(&q, &ctx, &BetaOrdering::new(itertools_perm(l)).unwrap()).unwrap().mix(&ctx.gibbs_state(), w2);
        if thermo_majorizes(&p, &q, &ctx).unwrap() && thermo_majorizes(&q, &r, &ctx).unwrap() {
            prop_assert!(thermo_majorizes(&p, &r, &ctx).unwrap());
        }
    }

    #[test]
    fn infinite_temperature_extremes_are_permutations(p in simplex(4), k in 0usize..24) {
        let ctx = two_qubit(0.0);
        let perm = itertools_perm(k);
        let q = extreme_point(&p, &ctx, &BetaOrdering::new(perm.clone()).unwrap()).unwrap();
        let mut sorted = p.as_slice().to_vec();
        sorted.sort_by(|a, b| b.total_cmp(a));
        for (rank, &level) in perm.iter().enumerate() {
            prop_assert!((q[level] - sorted[rank]).abs() < 1e-13);
        }
    }

    #[test]
    fn witness_is_minimal_at_extremes(p in simplex(4), beta in 0.0f64..4.0, w in prop::collection::vec(0.0f64..1.0, 24)) {
        let ctx = two_qubit(beta);
        let cone = future_cone(&p, &ctx).unwrap();
        let min_vertex = cone.extremes().iter().map(|(_, q)| f(q.as_slice())).fold(f64::INFINITY, f64::min);
        let n = cone.extremes().len();
        let total: f64 = w[..n].iter().sum::<f64>().max(1e-12);
        let mut mix = [0.0; 4];
        for ((_, q), wi) in cone.extremes().iter().zip(&w) {
            for k in 0..4 {
                mix[k] += wi / total * q[k];
            }
        }
        prop_assert!(f(&mix) >= min_vertex - TAU_F);
    }

    #[test]
    fn swap_of_degenerate_levels_is_a_symmetry(p in simplex(4), beta in 0.0f64..5.0) {
        let ctx = two_qubit(beta);
        let s = p.permuted(&[0, 2, 1, 3]);
        let a = thermal_witness(&p, &ctx).unwrap();
        let b = thermal_witness(&s, &ctx).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert_eq!(thermally_entanglable(&p, &ctx).unwrap(), thermally_entanglable(&s, &ctx).unwrap());
        prop_assert_eq!(tne_bruteforce(&p, &ctx).unwrap(), tne_bruteforce(&s, &ctx).unwrap());
    }

    #[test]
    fn negativity_from_witness(p in simplex(4)) {
        let q = p.as_slice();
        let fv = witness_f(&p).unwrap();
        let n = max_negativity(&p).unwrap();
        if fv < 0.0 {
            let s = q[0] + q[3];
            prop_assert!((n - 0.5 * ((s * s - fv).sqrt() - s)).abs() < 1e-12);
        } else {
            prop_assert_eq!(n, 0.0);
        }
    }

    #[test]
    fn negativity_decreases_with_witness(s in 0.0f64..1.0, a in 0.0f64..1.0, b in 0.0f64..1.0, c in 0.0f64..1.0) {
        // fix q1 + q4 = s and vary the split
        let (x, y) = (a.min(b), a.max(b));
        let rest = 1.0 - s;
        let state = |t: f64| PopVector::new(vec![s * t, rest * c, rest * (1.0 - c), s * (1.0 - t)]).unwrap();
        let (p1, p2) = (state(x), state(y));
        let (f1, f2) = (witness_f(&p1).unwrap(), witness_f(&p2).unwrap());
        let (n1, n2) = (max_negativity(&p1).unwrap(), max_negativity(&p2).unwrap());
        if f1 <= f2 {
            prop_assert!(n1 >= n2 - 1e-15);
        } else {
            prop_assert!(n2 >= n1 - 1e-15);
        }
    }

    #[test]
    fn ne_is_convex(x in simplex(4), y in simplex(4), lambda in 0.0f64..1.0) {
        if f(x.as_slice()) >= 0.0 && f(y.as_slice()) >= 0.0 {
            prop_assert!(f(x.mix(&y, lambda).as_slice()) >= -1e-12);
        }
    }

    #[test]
    fn ne_boundary_pairs_combine_inside(x1 in 0.0f64..0.5, y1 in 0.0f64..0.5, x2 in 0.0f64..0.5, y2 in 0.0f64..0.5, lambda in 0.0f64..1.0) {
        let r1 = ne_boundary_valid_roots(x1, y1).unwrap();
        let r2 = ne_boundary_valid_roots(x2, y2).unwrap();
        for &a in &r1 {
            for &b in &r2 {
                let p = [x1, y1, a, 1.0 - x1 - y1 - a];
                let q = [x2, y2, b, 1.0 - x2 - y2 - b];
                let m: Vec<f64> = p.iter().zip(&q).map(|(u, v)| lambda * u + (1.0 - lambda) * v).collect();
                prop_assert!(f(&m) >= -1e-12);
            }
        }
    }

    #[test]
    fn schedules_stay_in_cone(p in simplex(4), beta in 0.0f64..3.0, steps in prop::collection::vec((0usize..6, 0.0f64..1.0), 0..8)) {
        let ctx = two_qubit(beta);
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let s = ThermalizationSchedule {
            steps: steps.iter().map(|&(k, lambda)| ThermalizationStep { pair: pairs[k], lambda }).collect(),
        };
        for q in apply_schedule(&p, &ctx, &s).unwrap() {
            prop_assert!(thermo_majorizes(&p, &q, &ctx).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lindblad_preserves_density_matrix(p in simplex(4), beta in 0.0f64..3.0, k in 0usize..6, t in 0.0f64..3.0) {
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let ctx = two_qubit(beta);
        let rho = apply_subspace_rotation(&p, 0.4, 1.1).unwrap();
        let out = lindblad_pair_evolve(&rho, &ctx, pairs[k], t, 200).unwrap();
        out.validate().unwrap();
        // populations follow the classical partial thermalization
        let q = apply_schedule(
            &PopVector::new(rho.populations()).unwrap(),
            &ctx,
            &ThermalizationSchedule { steps: vec![ThermalizationStep { pair: pairs[k], lambda: lambda_for_time(t) }] },
        ).unwrap();
        for (a, b) in out.populations().iter().zip(q[1].as_slice()) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }
}

/// The k-th permutation of 0..4 in lexicographic order.
fn itertools_perm(mut k: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..4).collect();
    let mut out = Vec::new();
    for f in [6, 2, 1, 1] {
        out.push(pool.remove(k / f));
        k %= f;
    }
    out
}

#[test]
fn f_is_not_globally_concave() {
    let x = [0.5, 0.0, 0.0, 0.5];
    let y = [0.0, 0.5, 0.5, 0.0];
    let mid = [0.25; 4];
    assert!(f(&mid) < 0.5 * f(&x) + 0.5 * f(&y));
}

#[test]
fn tne_volume_non_increasing_in_beta() {
    let n = 200_000;
    let mut prev: Option<VolumeEstimate> = None;
    for k in 0..=10 {
        let beta = 0.5 * k as f64;
        let v = volume_of(SetId::TNE, &two_qubit(beta), None, n, 21 + k as u64).unwrap();
        if let Some(p) = &prev {
            assert!(v.fraction <= p.fraction + 2.0 * v.joint_sigma(p), "beta {beta}: {} after {}", v.fraction, p.fraction);
        }
        prev = Some(v);
    }
}

#[test]
fn cone_volume_is_monotone() {
    let ctx = two_qubit(1.0);
    let p = PopVector::new(vec![0.05, 0.1, 0.15, 0.7]).unwrap();
    let vp = volume_of(SetId::EntCone, &ctx, Some(&p), 200_000, 31).unwrap();
    let cone = future_cone(&p, &ctx).unwrap();
    for (i, (_, ext)) in cone.extremes().iter().enumerate().take(6) {
        let q = ext.mix(&ctx.gibbs_state(), 0.8);
        assert!(cone.contains(&q).unwrap());
        let vq = volume_of(SetId::EntCone, &ctx, Some(&q), 200_000, 40 + i as u64).unwrap();
        assert!(vq.fraction <= vp.fraction + 2.0 * vq.joint_sigma(&vp));
    }
}

#[test]
fn jc_truncation_converges() {
    for (initial, beta_e) in [(InitialState::Ground, 0.5), (InitialState::Excited, 1.5), (InitialState::Ground, 3.0)] {
        let cfg = JcConfig::new(initial, beta_e);
        let mut big = cfg.clone();
        big.n_max = 2 * cfg.n_max;
        let a = jc_protocol(&cfg).unwrap();
        let b = jc_protocol(&big).unwrap();
        assert!((a.negativity - b.negativity).abs() < 1e-6, "{initial} {beta_e}: {} vs {}", a.negativity, b.negativity);
    }
}

#[test]
fn cone_negativity_matches_best_vertex() {
    for (p, beta) in [
        (vec![1.0, 0.0, 0.0, 0.0], 1.0),
        (vec![0.0, 0.0, 0.0, 1.0], 0.5),
        (vec![0.4, 0.25, 0.33, 0.02], 0.3),
        (vec![0.12, 0.38, 0.12, 0.38], 2.0),
    ] {
        let p = PopVector::new(p).unwrap();
        let ctx = two_qubit(beta);
        let best = max_negativity_over_cone(&p, &ctx).unwrap();
        let vertex = future_cone(&p, &ctx)
            .unwrap()
            .extremes()
            .iter()
            .map(|(_, q)| max_negativity(q).unwrap())
            .fold(0.0, f64::max);
        assert!((best.value - vertex).abs() < 1e-10, "{p:?}: {} vs {}", best.value, vertex);
        assert!(thermo_majorizes(&p, &best.state, &ctx).unwrap() || best.state.max_abs_diff(&p) < TAU_CMP);
    }
}

#[test]
fn entanglable_volume_is_one_third() {
    let v = volume_of(SetId::E, &two_qubit(0.0), None, 4_000_000, 5).unwrap();
    assert!((v.fraction - 1.0 / 3.0).abs() < 3.0 * v.std_error, "{} ± {}", v.fraction, v.std_error);
}
