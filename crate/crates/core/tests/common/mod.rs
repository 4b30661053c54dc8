//! Independent oracles for the integration and acceptance tests. Nothing
//! here calls into the library's numerical code.

#![allow(dead_code)]

/// `#{(i_0, ..., i_p) : X_{i_0} <= X_{i_1} <= ... <= X_{i_p} <= t} / n^(p+1)`
/// by enumerating every index tuple.
pub fn chain_count_integrated_edf(x: &[f64], p: u32, t: f64) -> f64 {
    let n = x.len();
    let len = p as usize + 1;
    let mut idx = vec![0usize; len];
    let mut hits = 0u64;
    loop {
        let chain = idx.windows(2).all(|w| x[w[0]] <= x[w[1]]) && x[idx[len - 1]] <= t;
        if chain {
            hits += 1;
        }
        let mut d = 0;
        loop {
            if d == len {
                return hits as f64 / (n as f64).powi(len as i32);
            }
            idx[d] += 1;
            if idx[d] < n {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

pub fn fact(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Step level `C(k + p, p + 1) / n^(p+1)` as a float product.
pub fn level(k: usize, n: usize, p: u32) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let mut v = 1.0;
    for i in 0..=p {
        v *= (k as f64 + i as f64) / n as f64;
    }
    v / fact(p + 1)
}

/// Adaptive Simpson on `[a, b]`.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// `n ∫_0^1 (level(#u_i <= v) - v^(p+1)/(p+1)!)^2 dv` by quadrature on each
/// gap between sorted scores.
pub fn cvm_quadrature(sorted_u: &[f64], p: u32) -> f64 {
    let n = sorted_u.len();
    let c = fact(p + 1);
    let mut knots = vec![0.0];
    knots.extend_from_slice(sorted_u);
    knots.push(1.0);
    let mut total = 0.0;
    for (k, w) in knots.windows(2).enumerate() {
        let lv = level(k, n, p);
        let f = |v: f64| {
            let d = lv - v.powi(p as i32 + 1) / c;
            d * d
        };
        if w[1] > w[0] {
            total += simpson(&f, w[0], w[1], 1e-15);
        }
    }
    n as f64 * total
}

/// `1/(12n) + Σ (u_(i) - (2i-1)/(2n))^2`.
pub fn classical_cvm(sorted_u: &[f64]) -> f64 {
    let n = sorted_u.len() as f64;
    1.0 / (12.0 * n)
        + sorted_u
            .iter()
            .enumerate()
            .map(|(i, &u)| (u - (2.0 * i as f64 + 1.0) / (2.0 * n)).powi(2))
            .sum::<f64>()
}

/// Kolmogorov distribution `P(sup|B| <= x) = 1 - 2 Σ (-1)^(k-1) e^(-2k²x²)`.
pub fn kolmogorov_cdf(x: f64) -> f64 {
    let mut s = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * x * x).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    1.0 - 2.0 * s
}

pub fn kolmogorov_quantile(q: f64) -> f64 {
    let (mut lo, mut hi) = (0.3, 5.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_cdf(mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `Σ_{i<j} max(0, 1 - |s_i - s_j|)`.
pub fn naive_self_intersection(s: &[f64]) -> f64 {
    let mut total = 0.0;
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            total += (1.0 - (s[i] - s[j]).abs()).max(0.0);
        }
    }
    total
}

/// Sample covariance and its Monte Carlo standard error.
pub fn cov_with_se(a: &[f64], b: &[f64]) -> (f64, f64) {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let prods: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).collect();
    let c = prods.iter().sum::<f64>() / (n - 1.0);
    let var = prods.iter().map(|p| (p - c).powi(2)).sum::<f64>() / (n - 1.0);
    (c, (var / n).sqrt())
}

/// Power-table values from the reference publication, n = 20, alpha = 0.05.
/// Rows A1.5, A2, B1.5, B2, B3, C1.5, C2, C3; columns p = 0..3.
pub const TABLE_N20: [(&str, [u32; 4]); 8] = [
    ("A1.5", [28, 42, 37, 0]),
    ("A2", [70, 83, 77, 0]),
    ("B1.5", [6, 15, 16, 0]),
    ("B2", [13, 34, 38, 0]),
    ("B3", [42, 74, 78, 0]),
    ("C1.5", [16, 8, 7, 18]),
    ("C2", [31, 17, 17, 36]),
    ("C3", [67, 42, 42, 63]),
];
