//! Fixed-step RK4 integration and invariant drift, a floating-point check on
//! the exact results.
//!
//! Powers follow the principal real branch: an integer exponent accepts any
//! sign of base (nonzero when the exponent is negative), a fractional one
//! needs a positive base.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::algebra::{to_f64, RatVector};
use crate::error::{Error, Result};
use crate::integral::{Integral, IntegralTerm};
use crate::system::MultinomialSystem;

/// An exponent row converted once for repeated evaluation.
#[derive(Clone, Debug)]
struct FloatMonomial {
    /// `Some(k)` for integer exponents.
    powers: Vec<(Option<i32>, f64)>,
}

impl FloatMonomial {
    fn new(b: &RatVector) -> Self {
        FloatMonomial {
            powers: b
                .iter()
                .map(|x| {
                    let int = x.is_integer().then(|| x.to_integer().to_i32()).flatten();
                    (int, to_f64(x))
                })
                .collect(),
        }
    }

    fn eval(&self, y: &[f64]) -> std::result::Result<f64, String> {
        let mut out = 1.0;
        for (i, (&(int, real), &base)) in self.powers.iter().zip(y).enumerate() {
            out *= match int {
                Some(0) => 1.0,
                Some(k) if k < 0 && base == 0.0 => {
                    return Err(format!("y{} = 0 raised to negative power {k}", i + 1))
                }
                Some(k) => base.powi(k),
                None if base <= 0.0 => {
                    return Err(format!(
                        "y{} = {base} raised to fractional power {real}",
                        i + 1
                    ))
                }
                None => base.powf(real),
            };
        }
        Ok(out)
    }
}

/// Precomputed right-hand side: for each component `i`, terms
/// `c_ij Y^{H_j + unit_i}`.
struct Rhs {
    rows: Vec<Vec<(f64, FloatMonomial)>>,
}

impl Rhs {
    fn new(s: &MultinomialSystem) -> Self {
        let n = s.n();
        let rows = (0..n)
            .map(|i| {
                let unit = RatVector::unit(n, i);
                s.terms()
                    .iter()
                    .filter(|t| !num_traits::Zero::is_zero(&t.coef[i]))
                    .map(|t| (to_f64(&t.coef[i]), FloatMonomial::new(&(&t.expo + &unit))))
                    .collect()
            })
            .collect();
        Rhs { rows }
    }

    fn eval(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.rows
            .iter()
            .map(|row| {
                row.iter().try_fold(0.0, |acc, (c, m)| {
                    m.eval(y).map(|v| acc + c * v).map_err(Error::Domain)
                })
            })
            .collect()
    }
}

fn check_state(s: &MultinomialSystem, y: &[f64]) -> Result<()> {
    if y.len() != s.n() {
        return Err(Error::dimension("state vector", s.n(), y.len()));
    }
    Ok(())
}

/// `y_i' = sum_j c_ij Y^{H_j + unit_i}`.
pub fn rhs_eval(s: &MultinomialSystem, y: &[f64]) -> Result<Vec<f64>> {
    check_state(s, y)?;
    Rhs::new(s).eval(y)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

fn axpy(y: &[f64], a: f64, k: &[f64]) -> Vec<f64> {
    y.iter().zip(k).map(|(y, k)| y + a * k).collect()
}

/// Classical RK4 with `ceil(t / h)` steps of size `h`. State updates use
/// compensated summation so rounding does not build up over long runs.
pub fn rk4(s: &MultinomialSystem, y0: &[f64], h: f64, t: f64) -> Result<Trajectory> {
    check_state(s, y0)?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Invalid(format!(
            "step size must be positive, got {h}"
        )));
    }
    if !(t >= h && t.is_finite()) {
        return Err(Error::Invalid(format!(
            "horizon {t} must be at least the step {h}"
        )));
    }
    if y0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { step: 0 });
    }
    let rhs = Rhs::new(s);
    let steps = (t / h).ceil() as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut y = y0.to_vec();
    let mut carry = vec![0.0; y.len()];
    times.push(0.0);
    states.push(y.clone());
    for step in 1..=steps {
        let k1 = rhs.eval(&y)?;
        let k2 = rhs.eval(&axpy(&y, h / 2.0, &k1))?;
        let k3 = rhs.eval(&axpy(&y, h / 2.0, &k2))?;
        let k4 = rhs.eval(&axpy(&y, h, &k3))?;
        for i in 0..y.len() {
            let inc = h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) - carry[i];
            let next = y[i] + inc;
            carry[i] = (next - y[i]) - inc;
            y[i] = next;
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { step });
        }
        times.push(step as f64 * h);
        states.push(y.clone());
    }
    Ok(Trajectory { times, states })
}

fn terms_eval(terms: &[IntegralTerm], y: &[f64]) -> std::result::Result<f64, String> {
    terms.iter().try_fold(0.0, |acc, t| {
        FloatMonomial::new(&t.b)
            .eval(y)
            .map(|v| acc + to_f64(&t.e) * v)
    })
}

/// The integral at one state.
pub fn evaluate_integral(i: &Integral, y: &[f64]) -> Result<f64> {
    if y.len() != i.n() {
        return Err(Error::dimension("state vector", i.n(), y.len()));
    }
    let value = match i {
        Integral::Algebraic(a) => terms_eval(a.terms(), y),
        Integral::LogA(l) => FloatMonomial::new(l.log_expo()).eval(y).and_then(|m| {
            if m > 0.0 {
                terms_eval(l.terms(), y).map(|rest| m.ln() + rest)
            } else {
                Err(format!("logarithm of non-positive value {m}"))
            }
        }),
        Integral::LogB(l) => terms_eval(std::slice::from_ref(l.lead()), y).and_then(|lead| {
            let arg = 1.0 + terms_eval(l.inner(), y)?;
            if arg > 0.0 {
                Ok(lead + arg.ln())
            } else {
                Err(format!("logarithm of non-positive value {arg}"))
            }
        }),
    };
    value.map_err(Error::Domain)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DriftReport {
    pub initial: f64,
    pub max_drift: f64,
    pub step: f64,
    pub horizon: f64,
}

/// `max |I(y(t)) - I(y(0))|` over the samples.
pub fn drift(i: &Integral, tr: &Trajectory) -> Result<DriftReport> {
    let Some(first) = tr.states.first() else {
        return Err(Error::Invalid("empty trajectory".into()));
    };
    let initial = evaluate_integral(i, first)?;
    let mut max_drift: f64 = 0.0;
    for (idx, y) in tr.states.iter().enumerate() {
        let value =
            evaluate_integral(i, y).map_err(|e| Error::Domain(format!("sample {idx}: {e}")))?;
        max_drift = max_drift.max((value - initial).abs());
    }
    let step = tr.times.get(1).map_or(0.0, |t| t - tr.times[0]);
    Ok(DriftReport {
        initial,
        max_drift,
        step,
        horizon: tr.times.last().copied().unwrap_or(0.0),
    })
}
