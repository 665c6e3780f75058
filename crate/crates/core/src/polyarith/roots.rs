//! Real root isolation and refinement.
//!
//! Isolation is exact: a Sturm sequence over Q counts the real roots, and
//! recursive bisection produces disjoint open intervals with non-root
//! endpoints, one simple root each. Refinement runs Newton iteration on
//! decimal-snapped rationals (denominators are powers of ten, so every
//! evaluation is exact) with a bisection fallback, and certifies the final
//! error by an exact sign-change check before rounding.

use super::{poly_gcd, IntPolynomial};
use crate::numerics::{Int, NumericContext, Rational, Real};
use dashu_base::Abs;
use dashu_int::UBig;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootError {
    #[error("root refinement failed: {0}")]
    RefinementFailed(String),
    #[error("cannot isolate roots of a constant polynomial")]
    ConstantPolynomial,
}

type RatPoly = Vec<Rational>;

fn rp_trim(mut p: RatPoly) -> RatPoly {
    while p.last().is_some_and(|c| c == &Rational::ZERO) {
        p.pop();
    }
    p
}

fn rp_from_int(p: &IntPolynomial) -> RatPoly {
    p.coeffs().iter().map(|c| Rational::from(c.clone())).collect()
}

fn rp_eval(p: &RatPoly, x: &Rational) -> Rational {
    let mut acc = Rational::ZERO;
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn rp_derivative(p: &RatPoly) -> RatPoly {
    if p.len() <= 1 {
        return Vec::new();
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rational::from(Int::from(i)))
        .collect()
}

/// Divide by |leading| so chain entries stay size-bounded; keeps the sign.
fn rp_normalize(p: RatPoly) -> RatPoly {
    let p = rp_trim(p);
    match p.last() {
        Some(lc) if lc != &Rational::ZERO => {
            let scale = lc.clone().abs();
            p.into_iter().map(|c| c / &scale).collect()
        }
        _ => p,
    }
}

/// Remainder of a ÷ b over Q.
fn rp_rem(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    let mut r = a.clone();
    while rp_trim(r.clone()).len() > db {
        let r_t = rp_trim(r.clone());
        let dr = r_t.len() - 1;
        let factor = r_t.last().unwrap() / &lb;
        r = r_t;
        for (j, bc) in b.iter().enumerate() {
            let idx = dr - db + j;
            let delta = &factor * bc;
            r[idx] -= delta;
        }
        r = rp_trim(r);
        if r.is_empty() {
            break;
        }
    }
    rp_trim(r)
}

struct SturmChain {
    chain: Vec<RatPoly>,
}

impl SturmChain {
    /// Expects a squarefree polynomial of degree ≥ 1.
    fn new(p: &IntPolynomial) -> Self {
        let p0 = rp_normalize(rp_from_int(p));
        let p1 = rp_normalize(rp_derivative(&p0));
        let mut chain = vec![p0, p1];
        loop {
            let n = chain.len();
            if chain[n - 1].is_empty() {
                chain.pop();
                break;
            }
            if chain[n - 1].len() == 1 {
                break;
            }
            let rem = rp_rem(&chain[n - 2], &chain[n - 1]);
            if rem.is_empty() {
                break;
            }
            chain.push(rp_normalize(rem.into_iter().map(|c| -c).collect()));
        }
        SturmChain { chain }
    }

    fn sign_variations(&self, x: &Rational) -> usize {
        let signs: Vec<i8> = self
            .chain
            .iter()
            .map(|p| {
                let v = rp_eval(p, x);
                if v > Rational::ZERO {
                    1
                } else if v < Rational::ZERO {
                    -1
                } else {
                    0
                }
            })
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in (a, b), for non-root endpoints.
    fn count_in(&self, a: &Rational, b: &Rational) -> usize {
        self.sign_variations(a) - self.sign_variations(b)
    }
}

/// Cauchy bound: all real roots lie strictly inside (-M, M).
fn cauchy_bound(p: &IntPolynomial) -> Rational {
    let lead = Rational::from(p.leading().abs());
    let max = p
        .coeffs()
        .iter()
        .map(|c| Rational::from(c.clone().abs()))
        .fold(Rational::ZERO, |a, b| if b > a { b } else { a });
    Rational::ONE + max / lead
}

/// Disjoint open intervals `(a, b)` with non-root endpoints, each containing
/// exactly one real root of the squarefree polynomial `p`, sorted ascending.
pub fn isolate_real_roots(p: &IntPolynomial) -> Result<Vec<(Rational, Rational)>, RootError> {
    let pp = squarefree_primitive(p)?;
    if pp.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let chain = SturmChain::new(&pp);
    let bound = cauchy_bound(&pp);
    let lo = -bound.clone();
    let hi = bound;
    let rp = rp_from_int(&pp);
    let mut out = Vec::new();
    split(&chain, &rp, lo, hi, &mut out);
    Ok(out)
}

fn squarefree_primitive(p: &IntPolynomial) -> Result<IntPolynomial, RootError> {
    if p.degree().is_none() || p.degree() == Some(0) {
        return Err(RootError::ConstantPolynomial);
    }
    let g = poly_gcd(p, &p.derivative());
    let reduced = if g.degree() == Some(0) {
        p.clone()
    } else {
        p.exact_divide(&g).expect("gcd divides")
    };
    Ok(reduced.primitive_part().expect("nonzero"))
}

fn split(
    chain: &SturmChain,
    rp: &RatPoly,
    a: Rational,
    b: Rational,
    out: &mut Vec<(Rational, Rational)>,
) {
    match chain.count_in(&a, &b) {
        0 => {}
        1 => out.push((a, b)),
        _ => {
            let mid = non_root_point(rp, &a, &b);
            split(chain, rp, a, mid.clone(), out);
            split(chain, rp, mid, b, out);
        }
    }
}

/// A point strictly inside (a, b) where p does not vanish.
fn non_root_point(rp: &RatPoly, a: &Rational, b: &Rational) -> Rational {
    let two = Rational::from(Int::from(2));
    let mut mid = (a + b) / &two;
    let mut step = (b - a) / Rational::from(Int::from(16));
    while rp_eval(rp, &mid) == Rational::ZERO {
        mid += &step;
        step /= &two;
    }
    mid
}

fn sign_of(q: &Rational) -> i8 {
    if q > &Rational::ZERO {
        1
    } else if q < &Rational::ZERO {
        -1
    } else {
        0
    }
}

/// Snap to the decimal grid 10^-places (round to nearest).
fn snap(x: &Rational, places: u32) -> Rational {
    let scale = Int::from(10).pow(places as usize);
    let scaled = x * Rational::from(scale.clone());
    let floor = scaled.floor();
    let frac = scaled - Rational::from(floor.clone());
    let k = if frac >= Rational::from_parts(Int::ONE, UBig::from(2u8)) {
        floor + Int::ONE
    } else {
        floor
    };
    Rational::from_parts(k, UBig::try_from(scale).unwrap())
}

fn pow10_rational(places: u32) -> Rational {
    Rational::from_parts(Int::ONE, UBig::from(10u8).pow(places as usize))
}

/// Refine the unique simple root of `p` in the sign-change bracket
/// `(lo, hi)` until the absolute error is at most `10^-places`, then round
/// to that decimal place. The result's carried precision matches the
/// certified error: `resolution(result) = 10^-places`.
pub fn refine_in_interval(
    p: &IntPolynomial,
    lo: &Rational,
    hi: &Rational,
    places: u32,
) -> Result<Real, RootError> {
    let rp = rp_from_int(p);
    let dp = rp_derivative(&rp);
    let mut a = lo.clone();
    let mut b = hi.clone();
    let mut sa = sign_of(&rp_eval(&rp, &a));
    let sb = sign_of(&rp_eval(&rp, &b));
    if sa == 0 || sb == 0 || sa == sb {
        return Err(RootError::RefinementFailed(
            "endpoints do not bracket a sign change".into(),
        ));
    }

    let work_places = places + 3;
    let target_width = pow10_rational(work_places);

    // Bisection on decimal-snapped midpoints until Newton can take over.
    let coarse = pow10_rational(4);
    let mut exact_hit: Option<Rational> = None;
    while &b - &a > coarse {
        let width = &b - &a;
        let grid = decimal_grid_for(&width);
        let mid = snap(&((&a + &b) / Rational::from(Int::from(2))), grid);
        let mid = if mid <= a || mid >= b {
            (&a + &b) / Rational::from(Int::from(2))
        } else {
            mid
        };
        let v = rp_eval(&rp, &mid);
        match sign_of(&v) {
            0 => {
                exact_hit = Some(mid);
                break;
            }
            s if s == sa => a = mid,
            _ => b = mid,
        }
    }

    // Newton on decimal rationals, doubling the snapped precision.
    if exact_hit.is_none() {
        let mut m: u32 = 8;
        let mut x = snap(&((&a + &b) / Rational::from(Int::from(2))), m);
        if x <= a || x >= b {
            x = (&a + &b) / Rational::from(Int::from(2));
        }
        let mut stalled = 0u32;
        while m < 2 * work_places && stalled < 64 {
            let fx = rp_eval(&rp, &x);
            if fx == Rational::ZERO {
                exact_hit = Some(x.clone());
                break;
            }
            let dfx = rp_eval(&dp, &x);
            if dfx == Rational::ZERO {
                break; // fall back to bisection
            }
            m = (2 * m).min(2 * work_places);
            let next = snap(&(&x - fx / dfx), m);
            if next <= a || next >= b {
                stalled += 1;
                // Newton left the bracket: tighten it by one bisection step.
                let mid = non_root_point(&rp, &a, &b);
                let s = sign_of(&rp_eval(&rp, &mid));
                if s == 0 {
                    exact_hit = Some(mid);
                    break;
                } else if s == sa {
                    a = mid;
                } else {
                    b = mid;
                }
                x = (&a + &b) / Rational::from(Int::from(2));
                continue;
            }
            x = next;
        }
        if exact_hit.is_none() {
            // Certify |root - x| <= 2*10^-work_places; on failure keep
            // bisecting (exact, guaranteed) down to the target width.
            let eps = &target_width * Rational::from(Int::from(2));
            let certified = {
                let lo_t = &x - &eps;
                let hi_t = &x + &eps;
                let sl = sign_of(&rp_eval(&rp, &lo_t));
                let sh = sign_of(&rp_eval(&rp, &hi_t));
                sl != 0 && sh != 0 && sl != sh
            };
            if certified {
                a = (&x - &eps).max(a);
                b = (&x + &eps).min(b);
                sa = sign_of(&rp_eval(&rp, &a));
            }
            while &b - &a > target_width {
                let mid = non_root_point(&rp, &a, &b);
                let s = sign_of(&rp_eval(&rp, &mid));
                if s == 0 {
                    exact_hit = Some(mid);
                    break;
                } else if s == sa {
                    a = mid;
                } else {
                    b = mid;
                }
            }
        }
    }

    let estimate = match exact_hit {
        Some(r) => r,
        None => (&a + &b) / Rational::from(Int::from(2)),
    };
    // |root - estimate| <= 10^-(places+3); rounding to 10^-places adds at
    // most half an ulp, so the total error stays below one ulp.
    let rounded = snap(&estimate, places);
    Ok(decimal_to_real(&rounded, places))
}

fn decimal_grid_for(width: &Rational) -> u32 {
    let mut g = 0u32;
    let mut w = pow10_rational(0);
    while &w > width && g < 64 {
        g += 1;
        w = pow10_rational(g);
    }
    g + 2
}

/// Exact conversion of `k·10^-places` into a Real whose carried precision
/// claims exactly that resolution.
fn decimal_to_real(q: &Rational, places: u32) -> Real {
    let scale = Int::from(10).pow(places as usize);
    let k_rat = q * Rational::from(scale);
    debug_assert!(k_rat.denominator() == &UBig::ONE);
    let k = k_rat.numerator().clone();
    if k.is_zero() {
        return Real::ZERO;
    }
    let digits = k.to_string().trim_start_matches('-').len();
    let mag = digits as isize - 1 - places as isize;
    let precision = (mag + 1 + places as isize).max(1) as usize;
    Real::from_parts(k, -(places as isize))
        .with_precision(precision)
        .value()
}

/// A known-exact rational root, reported at the requested resolution.
pub(crate) fn real_roots_exact_point(q: &Rational, places: u32) -> Real {
    decimal_to_real(&snap(q, places), places)
}

/// All real roots of a squarefree polynomial, each within
/// `10^-(digits - guard)` of a true root, in decreasing order. The count is
/// exact (Sturm).
pub fn real_roots(p: &IntPolynomial, ctx: &NumericContext) -> Result<Vec<Real>, RootError> {
    let pp = squarefree_primitive(p)?;
    let intervals = isolate_real_roots(&pp)?;
    // refine past the requested accuracy by the derivative's magnitude, so
    // |p(root)| also lands at the 10^-(digits-guard) scale for large roots
    let deg = pp.degree().unwrap_or(1).max(1) as u32;
    let bound_digits = {
        let m = cauchy_bound(&pp).ceil();
        m.to_string().len() as u32
    };
    let places = ctx.effective_digits() + (deg - 1) * bound_digits + 1;
    let mut out = Vec::with_capacity(intervals.len());
    for (a, b) in intervals {
        out.push(refine_in_interval(&pp, &a, &b, places)?);
    }
    out.reverse();
    Ok(out)
}
