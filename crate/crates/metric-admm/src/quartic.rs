//! Closed-form roots of the quartic `a·γ⁴ + b·γ³ + d·γ + e = 0`.
//!
//! The quadratic coefficient is structurally zero for the polynomials built
//! from block norms, which simplifies the Ferrari-style radicals. Coefficients
//! coming from block norms always satisfy `a ≥ 0, b ≥ 0, d ≤ 0, e ≤ 0`; with
//! `a > 0` and `e < 0` the sign pattern has exactly one change, so exactly one
//! positive real root exists.
//!
//! Intermediate radicals can leave the real line even when all four roots are
//! real, so the evaluation is carried in complex arithmetic throughout and
//! only the final selection filters on the real part. A single Newton polish
//! step follows the radicals: the printed formula loses digits when the inner
//! cube-root argument suffers cancellation.
//!
//! [`bisect_positive_root`] is an independent bracketing oracle over the same
//! polynomial, used to cross-check the closed form.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients of `a·γ⁴ + b·γ³ + d·γ + e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticCoeffs {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub e: f64,
}

impl QuarticCoeffs {
    /// Builds the tuning quartic from squared block norms: the closed-form
    /// stationarity system for `(γ1, γ2)` eliminates `γ1` and leaves
    /// `γ2⁴·x2·l1 + γ2³·(x2·l0 + x0·l1) − γ2·(l2·x0 + l0·x1) − l2·x1 = 0`.
    pub fn from_block_norms(x1: f64, x0: f64, x2: f64, l1: f64, l0: f64, l2: f64) -> Self {
        QuarticCoeffs {
            a: x2 * l1,
            b: x2 * l0 + x0 * l1,
            d: -(l2 * x0 + l0 * x1),
            e: -(l2 * x1),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (((self.a * x + self.b) * x) * x + self.d) * x + self.e
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        (((z * self.a + self.b) * z) * z + self.d) * z + self.e
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        (z * 4.0 * self.a + 3.0 * self.b) * z * z + self.d
    }

    fn max_abs(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.d.abs()).max(self.e.abs())
    }

    /// The residual bound every returned root must satisfy.
    fn residual_ok(&self, z: Complex64) -> bool {
        let m = z.norm().max(1.0);
        self.eval_complex(z).norm() <= 1e-8 * self.max_abs() * m * m * m * m
    }
}

/// Sign-preserving real cube root.
fn cbrt_real(x: f64) -> f64 {
    x.cbrt()
}

/// The four roots from the zero-quadratic Ferrari radicals, each polished by
/// one Newton step. Requires `a != 0` and `(b, d)` not both zero.
///
/// Fails with [`Error::FormulaBreakdown`] when the inner radical `u4`
/// vanishes or when a polished root misses the residual bound
/// `|p(γ)| ≤ 1e-8 · max|coeff| · max(1, |γ|)⁴`; callers fall back to the
/// bisection oracle in that case.
pub fn roots_closed_form(c: &QuarticCoeffs) -> Result<[Complex64; 4]> {
    if c.a == 0.0 || !c.a.is_finite() {
        return Err(Error::DegenerateDegree);
    }
    if c.b == 0.0 && c.d == 0.0 {
        return Err(Error::DegenerateData("b and d are both zero".into()));
    }
    // roots are invariant under coefficient scaling; normalize to tame the
    // cubed intermediates
    let s = c.max_abs();
    let scaled = QuarticCoeffs { a: c.a / s, b: c.b / s, d: c.d / s, e: c.e / s };
    let (a, b, d, e) = (scaled.a, scaled.b, scaled.d, scaled.e);

    let u1 = 27.0f64.sqrt() / 2.0 * (a * d * d + b * b * e);
    let p = b * d - 4.0 * a * e;
    let radicand = Complex64::new(p * p * p + u1 * u1, 0.0);
    let u2 = Complex64::new(u1, 0.0) + radicand.sqrt();

    // u2 = 0 forces p = 0, in which case the cube-root pair contributes
    // nothing and u3 collapses to zero.
    let u3 = if u2.norm() == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        let cbrt_u2 = if u2.im == 0.0 {
            Complex64::new(cbrt_real(u2.re), 0.0)
        } else {
            u2.cbrt()
        };
        (cbrt_u2 - Complex64::new(p, 0.0) / cbrt_u2) / (3.0f64.sqrt() * a)
    };

    let b2a = b / (2.0 * a);
    let u4 = (Complex64::new(b2a * b2a, 0.0) + u3).sqrt();
    if u4.norm() < 1e-100 {
        return Err(Error::FormulaBreakdown);
    }
    let u5 = Complex64::new(2.0 * b2a * b2a, 0.0) - u3;
    let u6 = -Complex64::new(b * b * b / (a * a * a) + 8.0 * d / a, 0.0) / (u4 * 4.0);

    let minus = (u5 - u6).sqrt();
    let plus = (u5 + u6).sqrt();
    let shift = Complex64::new(-b2a, 0.0);
    let mut roots = [
        (shift - u4 - minus) * 0.5,
        (shift - u4 + minus) * 0.5,
        (shift + u4 - plus) * 0.5,
        (shift + u4 + plus) * 0.5,
    ];

    for r in &mut roots {
        // a nearly vanishing leading coefficient spreads the roots over many
        // orders of magnitude and the radicals cancel; a couple of extra
        // Newton steps recover the residual bound in those cases
        for _ in 0..4 {
            if scaled.residual_ok(*r) {
                break;
            }
            let dp = scaled.derivative(*r);
            if dp.norm() <= 1e-300 {
                break;
            }
            *r -= scaled.eval_complex(*r) / dp;
        }
        if !scaled.residual_ok(*r) {
            return Err(Error::FormulaBreakdown);
        }
    }
    Ok(roots)
}

/// Cauchy-style upper bound: every real root lies below `1 + max|coeff|/a`.
fn root_upper_bound(c: &QuarticCoeffs) -> f64 {
    1.0 + c.b.abs().max(c.d.abs()).max(c.e.abs()) / c.a
}

/// Independent oracle: brackets the unique positive real root by pure
/// bisection on `[0, 1 + max(|b|,|d|,|e|)/a]`.
///
/// Requires the block-norm sign pattern (`a > 0`, `b ≥ 0`, `d ≤ 0`, `e < 0`),
/// under which `p(0) < 0 < p(upper)` and the sign changes exactly once.
pub fn bisect_positive_root(c: &QuarticCoeffs) -> Result<f64> {
    check_block_norm_signs(c)?;
    let mut lo = 0.0f64;
    let mut hi = root_upper_bound(c);
    debug_assert!(c.eval(lo) < 0.0 && c.eval(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval exhausted at f64 resolution
        }
        if c.eval(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn check_block_norm_signs(c: &QuarticCoeffs) -> Result<()> {
    const TINY: f64 = 1e-300;
    if !(c.a > TINY) {
        return Err(Error::DegenerateData(format!(
            "leading quartic coefficient a = {:.3e} is not strictly positive",
            c.a
        )));
    }
    if !(c.e < -TINY) {
        return Err(Error::DegenerateData(format!(
            "constant quartic coefficient e = {:.3e} is not strictly negative",
            c.e
        )));
    }
    if c.b < 0.0 || c.d > 0.0 {
        return Err(Error::DegenerateData(
            "coefficients violate the block-norm sign pattern".into(),
        ));
    }
    Ok(())
}

/// The unique positive real root of a block-norm quartic.
///
/// Goes through the closed form and filters on the real axis; uniqueness is
/// guaranteed by the single sign change in `(a, b, d, e)`. Falls back to the
/// bisection oracle when the radicals break down, and polishes the result to
/// full precision either way.
pub fn unique_positive_root(c: &QuarticCoeffs) -> Result<f64> {
    check_block_norm_signs(c)?;
    let from_closed_form = match roots_closed_form(c) {
        Ok(roots) => {
            let mut candidates: Vec<f64> = roots
                .iter()
                .filter(|z| z.re > 0.0 && z.im.abs() <= 1e-9 * (1.0 + z.re.abs()))
                .map(|z| z.re)
                .collect();
            candidates.dedup_by(|x, y| (*x - *y).abs() <= 1e-9 * (1.0 + y.abs()));
            if candidates.len() == 1 {
                Some(candidates[0])
            } else {
                None
            }
        }
        Err(Error::FormulaBreakdown) => None,
        Err(other) => return Err(other),
    };
    let mut root = match from_closed_form {
        Some(r) => r,
        None => bisect_positive_root(c)?,
    };
    // polish to ~1e-12 residuals; the closed form alone can lose digits
    for _ in 0..2 {
        let dp = (((4.0 * c.a * root + 3.0 * c.b) * root) * root) + c.d;
        if dp.abs() <= 1e-300 {
            break;
        }
        root -= c.eval(root) / dp;
    }
    if !(root > 0.0) || !c.residual_ok(Complex64::new(root, 0.0)) {
        // radicals and polish both failed; trust the bracketing oracle
        root = bisect_positive_root(c)?;
    }
    Ok(root)
}
