use super::{gap_at, gap_profile, GapProfile, DEFAULT_COARSE_POINTS};
use crate::models::ModelSpec;
use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

const REL_TOL: f64 = 1e-7;
const MAX_INTERVALS: usize = 20_000;
/// Half-width of the analytic window around a narrow minimum, in units of
/// `g_min / v`.
const WINDOW_WIDTHS: f64 = 30.0;

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<Piece> {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let fc = f(c)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let (f1, f2) = (f(c - x)?, f(c + x)?);
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Ok(Piece { a, b, value: kronrod * h, error: ((kronrod - gauss) * h).abs() })
}

/// Globally adaptive Gauss–Kronrod (7/15) over consecutive segments; `extra`
/// is added to the total when checking the relative tolerance.
pub fn gauss_kronrod<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    segments: &[(f64, f64)],
    rel_tol: f64,
    extra: f64,
) -> Result<f64> {
    let mut pieces = Vec::new();
    for &(a, b) in segments {
        if b > a {
            pieces.push(gk15(&mut f, a, b)?);
        }
    }
    loop {
        let total: f64 = extra + pieces.iter().map(|p| p.value).sum::<f64>();
        let error: f64 = pieces.iter().map(|p| p.error).sum();
        if !total.is_finite() {
            return Err(Error::NoConvergence(format!("quadrature diverged: {total}")));
        }
        if error <= rel_tol * total.abs() || error == 0.0 {
            return Ok(total);
        }
        if pieces.len() >= MAX_INTERVALS {
            return Err(Error::NoConvergence(format!(
                "quadrature stalled at relative error {:e} after {} intervals",
                error / total.abs(),
                pieces.len()
            )));
        }
        let worst = (0..pieces.len()).max_by(|&i, &j| pieces[i].error.total_cmp(&pieces[j].error)).unwrap();
        let p = pieces.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            pieces.push(Piece { error: 0.0, ..p });
            continue;
        }
        pieces.push(gk15(&mut f, p.a, mid)?);
        pieces.push(gk15(&mut f, mid, p.b)?);
    }
}

/// `∫₀¹ ds / g(s)²` for the locally adiabatic schedule.
pub fn t_ann_optimal(model: &ModelSpec) -> Result<f64> {
    t_ann_optimal_with(model, &gap_profile(model, DEFAULT_COARSE_POINTS)?)
}

/// As [`t_ann_optimal`], reusing an existing profile of the same model.
pub fn t_ann_optimal_with(model: &ModelSpec, profile: &GapProfile) -> Result<f64> {
    let g = |s: f64| -> Result<f64> {
        let g = gap_at(model, s)?;
        if g > 0.0 {
            Ok(g)
        } else {
            Err(Error::Divergence { s })
        }
    };
    for (&s, &gap) in profile.s_points.iter().zip(&profile.gaps) {
        if gap > 0.0 {
            continue;
        }
        if s > 0.0 && s < 1.0 {
            return Err(Error::Divergence { s });
        }
        // g ~ |s − s_end|^α is integrable only for α < 1/2
        let inward = |d: f64| if s == 0.0 { d } else { 1.0 - d };
        let probe = |d: f64| g(inward(d)).map_err(|_| Error::Divergence { s });
        let (g1, g2) = (probe(1e-4)?, probe(1e-6)?);
        let alpha = (g1 / g2).ln() / 100f64.ln();
        if alpha >= 0.5 {
            return Err(Error::Divergence { s });
        }
    }

    let mut windows: Vec<(f64, f64)> = Vec::new();
    let mut analytic = 0.0;
    for &(s0, g0) in &profile.minima {
        if !(s0 > 0.0 && s0 < 1.0 && g0 > 0.0) {
            continue;
        }
        let (sn, gn) = profile.nearest_other(s0);
        let v0 = (gn * gn - g0 * g0).max(0.0).sqrt() / (sn - s0).abs();
        let w = WINDOW_WIDTHS * g0 / v0;
        if !(w.is_finite() && w < 1e-4) || s0 - w <= 0.0 || s0 + w >= 1.0 {
            continue;
        }
        if windows.iter().any(|&(a, b)| s0 + w > a && s0 - w < b) {
            continue;
        }
        let side = |x: f64| -> Result<Option<f64>> {
            let gx = g(x)?;
            let v = (gx * gx - g0 * g0).max(0.0).sqrt() / w;
            Ok((v > 0.0).then(|| (v * w / g0).atan() / (g0 * v)))
        };
        if let (Some(l), Some(r)) = (side(s0 - w)?, side(s0 + w)?) {
            analytic += l + r;
            windows.push((s0 - w, s0 + w));
        }
    }
    windows.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut breaks = vec![0.0];
    for &(a, b) in &windows {
        breaks.extend([a, b]);
    }
    breaks.push(1.0);
    let mut segments: Vec<(f64, f64)> = breaks.chunks(2).map(|c| (c[0], c[1])).collect();
    // split the open stretches at coarse minima without a window
    for &(s0, _) in &profile.minima {
        if let Some(i) = segments.iter().position(|&(a, b)| s0 > a && s0 < b) {
            let (a, b) = segments[i];
            segments.splice(i..=i, [(a, s0), (s0, b)]);
        }
    }
    gauss_kronrod(|s| g(s).map(|g| g.powi(-2)), &segments, REL_TOL, analytic)
}

impl GapProfile {
    /// Nearest grid point to `s` other than `s` itself.
    fn nearest_other(&self, s: f64) -> (f64, f64) {
        let i = self.s_points.partition_point(|&x| x < s);
        let mut best: Option<(f64, f64)> = None;
        for j in [i.wrapping_sub(1), i, i + 1] {
            if let (Some(&x), Some(&gx)) = (self.s_points.get(j), self.gaps.get(j)) {
                if x != s && best.is_none_or(|b| (x - s).abs() < (b.0 - s).abs()) {
                    best = Some((x, gx));
                }
            }
        }
        best.unwrap_or_else(|| self.nearest(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Driver;

    #[test]
    fn constant_and_polynomial_integrands() {
        let v = gauss_kronrod(|_| Ok(4.0), &[(0.0, 1.0)], 1e-12, 0.0).unwrap();
        assert!((v - 4.0).abs() < 1e-14);
        let v = gauss_kronrod(|x| Ok(x.powi(9)), &[(0.0, 0.5), (0.5, 1.0)], 1e-12, 0.0).unwrap();
        assert!((v - 0.1).abs() < 1e-15);
    }

    #[test]
    fn narrow_lorentzian() {
        let (g, v) = (1e-6f64, 2.0f64);
        let v_exact = ((v * 0.5 / g).atan() * 2.0) / (g * v);
        let got = gauss_kronrod(|x| Ok(1.0 / (g * g + v * v * (x - 0.5).powi(2))), &[(0.0, 0.5), (0.5, 1.0)], 1e-9, 0.0)
            .unwrap();
        assert!((got / v_exact - 1.0).abs() < 1e-8);
    }

    /// Two-level Grover gap `g² = (1−2s)² + 4s(1−s)/N`.
    fn grover_exact(n: u32) -> f64 {
        let big_n = 2f64.powi(n as i32);
        let e = 1.0 - 1.0 / big_n;
        // ∫ ds / (1 − 4e s(1−s))
        let r = (1.0 - e).sqrt();
        2.0 * (e.sqrt() / r).atan() / (e.sqrt() * r) / 2.0
    }

    #[test]
    fn grover_integral_matches_closed_form() {
        for n in [2, 10, 24, 40] {
            let m = ModelSpec::GroverPlain { driver: Driver::Grover, n, target_scale: 1.0 };
            let t = t_ann_optimal(&m).unwrap();
            let exact = grover_exact(n);
            assert!((t / exact - 1.0).abs() < 1e-6, "n={n}: {t} vs {exact}");
        }
    }

    #[test]
    fn n2_exceeds_linear_bound_share() {
        let m = ModelSpec::GroverPlain { driver: Driver::Grover, n: 2, target_scale: 1.0 };
        let t = t_ann_optimal(&m).unwrap();
        assert!(t.is_finite() && t > 1.0 && t < 4.0);
    }

    #[test]
    fn closing_gap_at_the_end_diverges() {
        use crate::models::BitString;
        let m = ModelSpec::MultiSolution {
            n: 6,
            targets: vec![BitString::from_index(3, 6), BitString::from_index(40, 6)],
        };
        match t_ann_optimal(&m) {
            Err(Error::Divergence { s }) => assert_eq!(s, 1.0),
            other => panic!("{other:?}"),
        }
    }
}
