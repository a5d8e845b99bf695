mod common;

use adm_core::analysis::fit_power_law;
use adm_core::curvature::CurvatureBundle;
use adm_core::field::{jet2, odd_part_jet, parity_split};
use adm_core::surfaces::g_normal_and_area;
use adm_core::{rt_violator, MetricField, MetricJet2};
use common::*;
use proptest::prelude::*;

fn symmetric_jet(n: usize, entries: &[f64]) -> MetricJet2 {
    let mut it = entries.iter().copied().cycle();
    let mut jet = MetricJet2::flat(n);
    for i in 0..n {
        for j in i..n {
            let base = if i == j { 1.0 } else { 0.0 };
            jet.set_g(i, j, base + 0.15 * it.next().unwrap());
            for k in 0..n {
                jet.set_dg(k, i, j, it.next().unwrap());
                for l in k..n {
                    jet.set_ddg(k, l, i, j, it.next().unwrap());
                }
            }
        }
    }
    jet
}

fn jet_strategy() -> impl Strategy<Value = MetricJet2> {
    (2usize..=5, prop::collection::vec(-1.0f64..1.0, 97)).prop_map(|(n, v)| symmetric_jet(n, &v))
}

fn point3() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-60.0f64..60.0, 3).prop_filter("outside the core", |x| {
        x.iter().map(|a| a * a).sum::<f64>().sqrt() > 8.0
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn christoffel_symbols_are_symmetric(jet in jet_strategy()) {
        let b = CurvatureBundle::from_jet(&jet).unwrap();
        let n = jet.dim();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    prop_assert_eq!(b.gamma(k, i, j), b.gamma(k, j, i));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                prop_assert!((b.ricci(i, j) - b.ricci(j, i)).abs() <= 1e-12 * (1.0 + b.ricci(i, j).abs()));
            }
        }
    }

    #[test]
    fn einstein_trace_is_fixed_multiple_of_scalar(jet in jet_strategy()) {
        let b = CurvatureBundle::from_jet(&jet).unwrap();
        let n = jet.dim();
        let mut trace = 0.0;
        for i in 0..n {
            for j in 0..n {
                trace += b.ginv(i, j) * b.einstein(i, j);
            }
        }
        let want = (1.0 - 0.5 * n as f64) * b.scalar();
        prop_assert!((trace - want).abs() <= 1e-10 * (1.0 + want.abs()), "{} vs {}", trace, want);
    }

    #[test]
    fn metric_normal_has_unit_length(jet in jet_strategy(), dir in prop::collection::vec(-1.0f64..1.0, 5)) {
        let n = jet.dim();
        let len = dir[..n].iter().map(|a| a * a).sum::<f64>().sqrt();
        prop_assume!(len > 1e-3);
        let nu: Vec<f64> = dir[..n].iter().map(|a| a / len).collect();
        let (nu_g, w) = g_normal_and_area(&jet, &nu, 1.0).unwrap();
        let mut q = 0.0;
        for i in 0..n {
            for j in 0..n {
                q += jet.g(i, j) * nu_g[i] * nu_g[j];
            }
        }
        prop_assert!((q - 1.0).abs() < 1e-12);
        prop_assert!(w > 0.0);
        // nu_g is g-orthogonal to every Euclidean tangent vector
        let lowered: Vec<f64> = (0..n).map(|i| (0..n).map(|j| jet.g(i, j) * nu_g[j]).sum()).collect();
        let dot: f64 = lowered.iter().zip(&nu).map(|(a, b)| a * b).sum();
        for i in 0..n {
            prop_assert!((lowered[i] - dot * nu[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn parity_parts_reconstruct_the_jet(x in point3(), pick in 0usize..8) {
        let (_, field) = catalog_n3().swap_remove(pick);
        prop_assume!(x.iter().map(|a| a * a).sum::<f64>().sqrt() >= field.inner_radius());
        let whole = jet2(&field, &x).unwrap();
        let (mut even, odd) = parity_split(&field, &x).unwrap();
        even.add_scaled(1.0, &odd);
        let d = even.max_abs_diff(&whole);
        prop_assert!(d.iter().all(|v| *v <= 1e-14), "{:?}", d);

        let minus: Vec<f64> = x.iter().map(|a| -a).collect();
        let (_, odd_minus) = parity_split(&field, &minus).unwrap();
        let mut sum = odd.clone();
        sum.add_scaled(1.0, &odd_minus);
        prop_assert!(sum.g_slice().iter().chain(sum.dg_slice()).chain(sum.ddg_slice()).all(|v| *v == 0.0));
    }

    #[test]
    fn odd_part_of_rt_violator_is_its_perturbation(x in point3(), amp in -0.45f64..0.45) {
        let field = rt_violator(3, amp).unwrap();
        let mut odd = odd_part_jet(&field, &x).unwrap();
        let mut h = jet2(&field, &x).unwrap();
        h.add_scaled(-1.0, &MetricJet2::flat(3));
        odd.add_scaled(-1.0, &h);
        prop_assert!(odd.max_abs_diff(&MetricJet2::zeros(3)).iter().all(|v| *v <= 1e-15));
    }

    #[test]
    fn power_law_fit_recovers_synthetic_data(
        limit in -3.0f64..3.0,
        amplitude in prop::sample::select(vec![-4.0, -0.5, 0.3, 2.0, 7.0]),
        rate in 0.5f64..2.0,
    ) {
        let radii: Vec<f64> = (0..7).map(|k| 10.0 * f64::from(1u32 << k)).collect();
        let values: Vec<f64> = radii.iter().map(|r| limit + amplitude * r.powf(-rate)).collect();
        let fit = fit_power_law(&radii, &values).unwrap();
        prop_assert!((fit.limit - limit).abs() <= 1e-10 * limit.abs().max(1.0), "{:?}", fit);
        prop_assert!((fit.rate - rate).abs() <= 1e-8 * rate, "{:?}", fit);
    }
}
