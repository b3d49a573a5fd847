//! Scalar root bracketing, adaptive Gauss-Kronrod quadrature and golden-section search.

use crate::error::{Error, Result};

/// Root of `f` on `[lo, hi]`, given a sign change.
///
/// Bisects until the bracket endpoints are adjacent floats, then tries one
/// secant step from the final bracket and keeps whichever point has the
/// smaller residual.
pub fn bracket_root(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !(f_lo.is_finite() && f_hi.is_finite()) || f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    let (mut best, mut f_best) = if f_lo.abs() <= f_hi.abs() {
        (lo, f_lo)
    } else {
        (hi, f_hi)
    };
    let x = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    if x > lo && x < hi {
        let fx = f(x);
        if fx.abs() < f_best.abs() {
            best = x;
            f_best = fx;
        }
    }
    debug_assert!(f_best.is_finite());
    Ok(best)
}

/// Minimum of a unimodal `f` on `[lo, hi]`, stopping once the bracket is
/// narrower than `width`. Returns `(x, f(x))`.
pub fn golden_min(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, width: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > width {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if c >= d {
            break;
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

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
// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct Integral<const K: usize> {
    pub value: [f64; K],
    pub abs_error: f64,
    pub segments: usize,
}

struct Segment<const K: usize> {
    a: f64,
    b: f64,
    value: [f64; K],
    error: f64,
    floor: f64,
    done: bool,
}

fn gk15<const K: usize>(f: &impl Fn(f64) -> [f64; K], a: f64, b: f64) -> Segment<K> {
    let c = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    let mut kron = [0.0; K];
    let mut gauss = [0.0; K];
    let mut absval = [0.0; K];
    for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let pts: &[f64] = if x == 0.0 { &[c] } else { &[c - hw * x, c + hw * x] };
        for &t in pts {
            let v = f(t);
            for k in 0..K {
                kron[k] += wk * v[k];
                absval[k] += wk * v[k].abs();
                if i % 2 == 1 {
                    gauss[k] += WG[i / 2] * v[k];
                }
            }
        }
    }
    let mut error: f64 = 0.0;
    let mut floor: f64 = 0.0;
    for k in 0..K {
        kron[k] *= hw;
        gauss[k] *= hw;
        error = error.max((kron[k] - gauss[k]).abs());
        floor = floor.max(50.0 * f64::EPSILON * absval[k] * hw);
    }
    Segment {
        a,
        b,
        value: kron,
        error: error.max(floor),
        floor,
        done: error <= floor,
    }
}

/// Integrates a vector-valued `f` over `[points[0], points[last]]`.
///
/// `points` must be sorted; each consecutive pair starts as its own segment so
/// kinks at those points are never straddled. The segment with the largest
/// error estimate is bisected until the summed estimate is at most `tol`.
/// Segments whose estimate is at the rounding floor are not split further,
/// and refinement also stops once the total is within a small multiple of the
/// summed floors, so `abs_error` can exceed an unreachable `tol`.
pub fn integrate<const K: usize>(
    f: impl Fn(f64) -> [f64; K],
    points: &[f64],
    tol: f64,
    max_segments: usize,
) -> Result<Integral<K>> {
    let mut segs: Vec<Segment<K>> = points
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| gk15(&f, w[0], w[1]))
        .collect();
    loop {
        let total: f64 = segs.iter().map(|s| s.error).sum();
        let noise: f64 = segs.iter().map(|s| s.floor).sum();
        let worst = segs
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.done)
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i);
        let finish = |segs: &[Segment<K>]| {
            let mut value = [0.0; K];
            for s in segs {
                for (v, x) in value.iter_mut().zip(s.value) {
                    *v += x;
                }
            }
            value
        };
        match worst {
            Some(i) if total > tol && total > 4.0 * noise => {
                if segs.len() >= max_segments {
                    return Err(Error::Quadrature {
                        tol,
                        error: total,
                        segments: segs.len(),
                        best: finish(&segs).to_vec(),
                    });
                }
                let s = segs.swap_remove(i);
                let mid = 0.5 * (s.a + s.b);
                if mid <= s.a || mid >= s.b {
                    segs.push(Segment { done: true, ..s });
                    continue;
                }
                segs.push(gk15(&f, s.a, mid));
                segs.push(gk15(&f, mid, s.b));
            }
            _ => {
                segs.sort_by(|x, y| x.a.total_cmp(&y.a));
                return Ok(Integral {
                    value: finish(&segs),
                    abs_error: total,
                    segments: segs.len(),
                });
            }
        }
    }
}
