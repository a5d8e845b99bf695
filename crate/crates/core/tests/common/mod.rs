#![allow(dead_code)]

use adm_core::catalog::{build, rt_violator, Bump, CatalogField, CatalogKind, CatalogSpec, Parity};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Uniform direction, radius uniform in `[r_min, r_max]`.
pub fn random_point(rng: &mut StdRng, n: usize, r_min: f64, r_max: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let len = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if len > 1e-3 && len <= 1.0 {
            let r = rng.gen_range(r_min..r_max);
            return v.iter().map(|a| a * r / len).collect();
        }
    }
}

pub fn random_points(seed: u64, n: usize, count: usize, r_min: f64, r_max: f64) -> Vec<Vec<f64>> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| random_point(&mut rng, n, r_min, r_max))
        .collect()
}

pub fn schwarzschild(n: usize, mass: f64) -> CatalogField {
    build(&CatalogSpec::new(n, CatalogKind::schwarzschild(mass))).unwrap()
}

pub fn shifted_schwarzschild(mass: f64, center: [f64; 3]) -> CatalogField {
    build(&CatalogSpec::new(
        3,
        CatalogKind::Schwarzschild {
            mass,
            center: center.to_vec(),
        },
    ))
    .unwrap()
}

pub fn conformal(coefficients: &[f64], center: [f64; 3]) -> CatalogField {
    build(&CatalogSpec::new(
        3,
        CatalogKind::Conformal {
            coefficients: coefficients.to_vec(),
            center: center.to_vec(),
        },
    ))
    .unwrap()
}

/// Flat metric plus a Gaussian bump that is negligible outside `B(50)`.
pub fn compact_bump() -> CatalogField {
    bump_on_flat(0.1, 8.0, [10.0, 5.0, -3.0], Parity::None)
}

pub fn bump_on_flat(
    amplitude: f64,
    width: f64,
    location: [f64; 3],
    parity: Parity,
) -> CatalogField {
    build(&CatalogSpec::new(
        3,
        CatalogKind::Perturbed {
            base: Box::new(CatalogKind::Flat),
            bump: Bump {
                amplitude,
                width,
                location: location.to_vec(),
                parity,
                pattern: Some(vec![1.0, 0.4, -0.2, 0.4, 0.8, 0.3, -0.2, 0.3, 1.2]),
            },
        },
    ))
    .unwrap()
}

/// Every three-dimensional catalog field that satisfies the decay hypothesis
/// `h = o_2(|x|^{-1/2})`.
pub fn catalog_n3() -> Vec<(&'static str, CatalogField)> {
    vec![
        (
            "flat",
            build(&CatalogSpec::new(3, CatalogKind::Flat)).unwrap(),
        ),
        ("schwarzschild", schwarzschild(3, 1.0)),
        (
            "schwarzschild_shifted",
            shifted_schwarzschild(1.0, [1.0, 2.0, 3.0]),
        ),
        ("conformal", conformal(&[1.0, 1.0], [0.0; 3])),
        (
            "conformal_shifted",
            conformal(&[0.6, -0.3, 0.2], [0.5, -0.5, 1.0]),
        ),
        (
            "bump",
            bump_on_flat(0.1, 2.0, [1.0, 0.5, -0.5], Parity::None),
        ),
        ("bump_on_schwarzschild", {
            build(&CatalogSpec::new(
                3,
                CatalogKind::Perturbed {
                    base: Box::new(CatalogKind::schwarzschild(0.5)),
                    bump: Bump {
                        amplitude: 0.05,
                        width: 1.5,
                        location: vec![2.0, 0.0, 1.0],
                        parity: Parity::Even,
                        pattern: None,
                    },
                },
            ))
            .unwrap()
        }),
        ("rt_violator", rt_violator(3, 0.2).unwrap()),
    ]
}

/// Scalar curvature of `u^(4/(n-2)) delta` for radial `u = 1 + sum a_k rho^-k`
/// from `R = -4 (n-1)/(n-2) u^(-(n+2)/(n-2)) Laplacian(u)`.
pub fn conformal_scalar_oracle(n: usize, coefficients: &[f64], center: &[f64], x: &[f64]) -> f64 {
    let rho = x
        .iter()
        .zip(center)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let nf = n as f64;
    let mut u = 1.0;
    let mut lap = 0.0;
    for (idx, a) in coefficients.iter().enumerate() {
        let k = (idx + 1) as f64;
        u += a * rho.powf(-k);
        // Laplacian of rho^-k in R^n
        lap += a * k * (k + 2.0 - nf) * rho.powf(-k - 2.0);
    }
    -4.0 * (nf - 1.0) / (nf - 2.0) * u.powf(-(nf + 2.0) / (nf - 2.0)) * lap
}

fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `int_{S_r} x_1^e_1 ... x_n^e_n dsigma`, zero unless all exponents are even.
pub fn sphere_monomial_moment(exps: &[u32], r: f64) -> f64 {
    if exps.iter().any(|e| e % 2 == 1) {
        return 0.0;
    }
    let n = exps.len() as f64;
    let d: u32 = exps.iter().sum();
    let betas: f64 = exps
        .iter()
        .map(|e| gamma((*e as f64 + 1.0) / 2.0))
        .product();
    2.0 * betas / gamma((d as f64 + n) / 2.0) * r.powf(d as f64 + n - 1.0)
}

/// Composite Simpson rule on `[a, b]` with `m` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}
