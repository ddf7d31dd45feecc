//! Reference values from adaptive Simpson quadrature in `f64`.
//!
//! Nothing here calls the library: the density is restated from its
//! definition and integrated numerically, so agreement with the certified
//! closed forms is an independent check of both.

#![allow(dead_code)]

/// A quadrature result with a conservative absolute error bar.
#[derive(Clone, Copy, Debug)]
pub struct Approx {
    pub value: f64,
    pub error: f64,
}

impl Approx {
    pub fn lo(&self) -> f64 {
        self.value - self.error
    }

    pub fn hi(&self) -> f64 {
        self.value + self.error
    }
}

/// The density: 1 on `(0, 4]`; on `(2^{n−1}, 2^n]`, `n ≥ 3`, it is 1 up to
/// `2^n − 2^{√n}` and 2 after.
pub fn phi(t: f64) -> f64 {
    if t <= 4.0 {
        return 1.0;
    }
    let mut n = t.log2().ceil() as i32;
    // Guard the ceiling against rounding at exact powers of two.
    if 2f64.powi(n - 1) >= t {
        n -= 1;
    }
    let breakpoint = 2f64.powi(n) - (n as f64).sqrt().exp2();
    if t <= breakpoint {
        1.0
    } else {
        2.0
    }
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    floor: f64,
    depth: u32,
    err: &mut f64,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    let tiny = (b - a) <= 1e-13 * a.abs().max(1.0);
    // Below the integrand's own rounding noise the tolerance stops halving.
    let tol = tol.max(floor * (left + right).abs());
    if delta.abs() <= 15.0 * tol || depth == 0 || tiny {
        // Accepted leaf: Richardson-corrected value; leaves forced by the
        // depth or width limit carry their whole discrepancy.
        *err += if delta.abs() <= 15.0 * tol {
            delta.abs() / 15.0
        } else {
            delta.abs() + (b - a) * (fa.abs().max(fb.abs()))
        };
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, tol / 2.0, floor, depth - 1, err)
        + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, floor, depth - 1, err)
}

/// `∫_a^b f` to absolute tolerance `tol`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Approx {
    integrate_noisy(f, a, b, tol, 16.0 * f64::EPSILON)
}

/// As [`integrate`], for an integrand whose values carry relative noise
/// `floor`.
pub fn integrate_noisy(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, floor: f64) -> Approx {
    if a == b {
        return Approx { value: 0.0, error: 0.0 };
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    let mut err = 0.0;
    let value = recurse(f, a, b, fa, fm, fb, whole, tol, floor, 60, &mut err);
    // Floating-point summation noise on top of the discretization estimate.
    Approx {
        value,
        error: 4.0 * err + 64.0 * f64::EPSILON * value.abs(),
    }
}

/// `f(u) = ∫_0^u φ`, integrated over unit cells so each cell holds at most
/// one jump of `φ`.
pub struct FOracle {
    /// `cells[k]` = `∫_0^k φ`.
    cells: Vec<Approx>,
}

impl FOracle {
    pub fn new(u_max: usize) -> Self {
        let mut cells = vec![Approx { value: 0.0, error: 0.0 }];
        for k in 0..u_max {
            let c = integrate(&phi, k as f64, (k + 1) as f64, 1e-15);
            let prev = cells[k];
            cells.push(Approx {
                value: prev.value + c.value,
                error: prev.error + c.error,
            });
        }
        FOracle { cells }
    }

    pub fn f(&self, u: f64) -> Approx {
        assert!(u >= 0.0 && u <= (self.cells.len() - 1) as f64, "u = {u} outside the oracle table");
        let k = u.floor() as usize;
        let base = self.cells[k];
        let rest = integrate(&phi, k as f64, u, 1e-15);
        Approx {
            value: base.value + rest.value,
            error: base.error + rest.error,
        }
    }

    /// `Φ(2^w) = 1 + ln 2·∫_0^w 2^{f(s)} ds` for `w ≥ 0`, and `2^w` below.
    pub fn phi_big_log(&self, w: f64) -> Approx {
        if w <= 0.0 {
            return Approx { value: w.exp2(), error: 0.0 };
        }
        let ln2 = std::f64::consts::LN_2;
        // The integrand error propagates as 2^f·ln2·δf; bound it with the
        // largest f on the range.
        let top = self.f(w);
        let integrand = |s: f64| (self.f(s).value).exp2();
        let scale = top.hi().exp2();
        // Split where φ jumps so every piece has a smooth integrand.
        let mut cuts = vec![0.0];
        for n in 3..=w.log2().ceil().max(3.0) as i32 {
            let end = 2f64.powi(n);
            cuts.push(end - (n as f64).sqrt().exp2());
            cuts.push(end);
        }
        cuts.retain(|&c| c < w);
        cuts.push(w);
        let noise = 1e-13;
        let mut q = Approx { value: 0.0, error: 0.0 };
        for piece in cuts.windows(2) {
            let r = integrate_noisy(&integrand, piece[0], piece[1], 1e-14 * scale, noise);
            q.value += r.value;
            q.error += r.error + noise * r.value.abs();
        }
        let f_err = (0..=w.ceil() as usize)
            .map(|k| self.cells[k.min(self.cells.len() - 1)].error)
            .fold(0.0, f64::max)
            + 1e-14;
        let value = 1.0 + ln2 * q.value;
        let error = ln2 * q.error + ln2 * q.value * ln2 * f_err + 64.0 * f64::EPSILON * value;
        Approx { value, error }
    }
}
