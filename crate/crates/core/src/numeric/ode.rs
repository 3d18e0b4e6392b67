//! Dormand–Prince 5(4) integrator with step-size control and cubic Hermite
//! dense output.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: Option<f64>,
    pub h_max: f64,
    pub max_steps: usize,
    /// |y| above this is reported as a blowup.
    pub blowup_cap: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-12, atol: 1e-12, h_init: None, h_max: f64::INFINITY, max_steps: 2_000_000, blowup_cap: 1e12 }
    }
}

impl OdeOptions {
    pub fn tol(tol: f64) -> Self {
        Self { rtol: tol, atol: tol, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Completed,
    /// The caller's stop predicate fired.
    Stopped,
    Blowup,
}

/// Accepted steps of one integration, with Hermite interpolation between them.
#[derive(Debug, Clone)]
pub struct Trajectory<const D: usize> {
    pub ts: Vec<f64>,
    pub ys: Vec<[f64; D]>,
    pub fs: Vec<[f64; D]>,
    pub status: Termination,
    pub rejected: usize,
}

impl<const D: usize> Trajectory<D> {
    pub fn last_t(&self) -> f64 {
        *self.ts.last().expect("trajectory has a start point")
    }

    pub fn last(&self) -> [f64; D] {
        *self.ys.last().expect("trajectory has a start point")
    }

    /// Dense output at `t` inside the integrated span.
    pub fn at(&self, t: f64) -> Option<[f64; D]> {
        let n = self.ts.len();
        let forward = n < 2 || self.ts[n - 1] >= self.ts[0];
        let key = |s: f64| if forward { s } else { -s };
        let (lo, hi) = (key(self.ts[0]), key(self.ts[n - 1]));
        let kt = key(t);
        if kt < lo || kt > hi {
            return None;
        }
        if n == 1 {
            return Some(self.ys[0]);
        }
        let i = match self.ts.binary_search_by(|s| key(*s).total_cmp(&kt)) {
            Ok(i) => return Some(self.ys[i]),
            Err(i) => i.clamp(1, n - 1),
        };
        Some(hermite(self.ts[i - 1], &self.ys[i - 1], &self.fs[i - 1], self.ts[i], &self.ys[i], &self.fs[i], t))
    }
}

pub fn hermite<const D: usize>(t0: f64, y0: &[f64; D], f0: &[f64; D], t1: f64, y1: &[f64; D], f1: &[f64; D], t: f64) -> [f64; D] {
    let h = t1 - t0;
    let s = (t - t0) / h;
    let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    let h10 = s * (1.0 - s) * (1.0 - s);
    let h01 = s * s * (3.0 - 2.0 * s);
    let h11 = s * s * (s - 1.0);
    let mut out = [0.0; D];
    for k in 0..D {
        out[k] = h00 * y0[k] + h10 * h * f0[k] + h01 * y1[k] + h11 * h * f1[k];
    }
    out
}

/// Stepper state; `advance_to` lands exactly on the requested abscissa.
pub struct Dopri<const D: usize, F>
where
    F: FnMut(f64, &[f64; D]) -> [f64; D],
{
    rhs: F,
    pub t: f64,
    pub y: [f64; D],
    pub f: [f64; D],
    h: f64,
    opts: OdeOptions,
    pub steps: usize,
    pub rejected: usize,
}

fn axpy<const D: usize>(y: &[f64; D], h: f64, terms: &[(f64, &[f64; D])]) -> [f64; D] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..D {
            out[i] += h * c * k[i];
        }
    }
    out
}

impl<const D: usize, F> Dopri<D, F>
where
    F: FnMut(f64, &[f64; D]) -> [f64; D],
{
    pub fn new(mut rhs: F, t0: f64, y0: [f64; D], opts: OdeOptions) -> Self {
        let f = rhs(t0, &y0);
        Self { rhs, t: t0, y: y0, f, h: opts.h_init.unwrap_or(0.0), opts, steps: 0, rejected: 0 }
    }

    fn initial_step(&mut self, dir: f64, span: f64) -> f64 {
        let d0 = self.scaled_norm(&self.y, &self.y);
        let d1 = self.scaled_norm(&self.f, &self.y);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(span);
        let y1 = axpy(&self.y, dir * h0, &[(1.0, &self.f)]);
        let f1 = (self.rhs)(self.t + dir * h0, &y1);
        let mut df = [0.0; D];
        for i in 0..D {
            df[i] = f1[i] - self.f[i];
        }
        let d2 = self.scaled_norm(&df, &self.y) / h0;
        let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
        (100.0 * h0).min(h1).min(span).min(self.opts.h_max)
    }

    fn scaled_norm(&self, v: &[f64; D], y: &[f64; D]) -> f64 {
        let mut s = 0.0;
        for i in 0..D {
            let sc = self.opts.atol + self.opts.rtol * y[i].abs();
            s += (v[i] / sc).powi(2);
        }
        (s / D as f64).sqrt()
    }

    /// Attempts one step of size `h` (signed); returns the new point and its error norm.
    fn try_step(&mut self, h: f64) -> ([f64; D], [f64; D], f64) {
        let t = self.t;
        let y = self.y;
        let k1 = self.f;
        let k2 = (self.rhs)(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = (self.rhs)(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = (self.rhs)(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = (self.rhs)(t + C5 * h, &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = (self.rhs)(t + h, &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y_new = axpy(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = (self.rhs)(t + h, &y_new);
        let mut err = [0.0; D];
        for i in 0..D {
            err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let mut s = 0.0;
        for i in 0..D {
            let sc = self.opts.atol + self.opts.rtol * y[i].abs().max(y_new[i].abs());
            s += (err[i] / sc).powi(2);
        }
        let en = (s / D as f64).sqrt();
        (y_new, k7, if en.is_finite() { en } else { f64::INFINITY })
    }

    /// Takes one accepted step toward `t_end` without passing it.
    pub fn step_toward(&mut self, t_end: f64) -> Result<()> {
        let dir = if t_end >= self.t { 1.0 } else { -1.0 };
        let span = (t_end - self.t).abs();
        if span == 0.0 {
            return Ok(());
        }
        if self.h <= 0.0 {
            self.h = self.initial_step(dir, span);
        }
        loop {
            let mut h = self.h.min(self.opts.h_max);
            let last = h >= span;
            if last {
                h = span;
            }
            let (y_new, f_new, en) = self.try_step(dir * h);
            if en <= 1.0 {
                let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
                self.t = if last { t_end } else { self.t + dir * h };
                self.y = y_new;
                self.f = f_new;
                if !last || fac > 1.0 {
                    self.h = h * fac;
                }
                self.steps += 1;
                return Ok(());
            }
            self.rejected += 1;
            let fac = (0.9 * en.powf(-0.2)).clamp(0.1, 0.9);
            self.h = h * fac;
            if self.h < 1e-14 * self.t.abs().max(1.0) {
                return Err(Error::StepUnderflow { t: self.t });
            }
        }
    }

    pub fn advance_to(&mut self, t_end: f64) -> Result<()> {
        let mut n = 0;
        while self.t != t_end {
            self.step_toward(t_end)?;
            n += 1;
            if n > self.opts.max_steps {
                return Err(Error::StepUnderflow { t: self.t });
            }
            if self.y.iter().any(|v| !v.is_finite() || v.abs() > self.opts.blowup_cap) {
                return Err(Error::Blowup { t: self.t });
            }
        }
        Ok(())
    }
}

/// Integrates from `t0` to `t1`, stopping early when `stop` returns true or
/// when the solution exceeds the blowup cap.
pub fn ode_solve_until<const D: usize, F, S>(rhs: F, t0: f64, t1: f64, y0: [f64; D], opts: OdeOptions, mut stop: S) -> Result<Trajectory<D>>
where
    F: FnMut(f64, &[f64; D]) -> [f64; D],
    S: FnMut(f64, &[f64; D]) -> bool,
{
    let mut st = Dopri::new(rhs, t0, y0, opts);
    let mut traj = Trajectory { ts: vec![t0], ys: vec![y0], fs: vec![st.f], status: Termination::Completed, rejected: 0 };
    while st.t != t1 {
        st.step_toward(t1)?;
        traj.ts.push(st.t);
        traj.ys.push(st.y);
        traj.fs.push(st.f);
        if st.y.iter().any(|v| !v.is_finite() || v.abs() > opts.blowup_cap) {
            traj.status = Termination::Blowup;
            break;
        }
        if stop(st.t, &st.y) {
            traj.status = Termination::Stopped;
            break;
        }
        if st.steps > opts.max_steps {
            return Err(Error::StepUnderflow { t: st.t });
        }
    }
    traj.rejected = st.rejected;
    Ok(traj)
}

pub fn ode_solve<const D: usize, F>(rhs: F, t0: f64, t1: f64, y0: [f64; D], opts: OdeOptions) -> Result<Trajectory<D>>
where
    F: FnMut(f64, &[f64; D]) -> [f64; D],
{
    ode_solve_until(rhs, t0, t1, y0, opts, |_, _| false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let tr = ode_solve(|_, y: &[f64; 1]| [y[0]], 0.0, 1.0, [1.0], OdeOptions::tol(1e-10)).unwrap();
        assert_eq!(tr.status, Termination::Completed);
        assert!((tr.last()[0] - std::f64::consts::E).abs() < 1e-9);
        let mid = tr.at(0.5).unwrap()[0];
        assert!((mid - 0.5f64.exp()).abs() < 1e-6);
    }

    #[test]
    fn backward_integration() {
        let tr = ode_solve(|t, _y: &[f64; 1]| [t.cos()], 2.0, 0.0, [2.0f64.sin()], OdeOptions::default()).unwrap();
        assert!(tr.last()[0].abs() < 1e-11);
        assert!(tr.at(1.0).is_some());
        assert!(tr.at(3.0).is_none());
    }

    #[test]
    fn harmonic_oscillator_system() {
        let tr = ode_solve(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, std::f64::consts::PI, [0.0, 1.0], OdeOptions::default()).unwrap();
        let [x, v] = tr.last();
        assert!(x.abs() < 1e-10 && (v + 1.0).abs() < 1e-10);
    }

    #[test]
    fn blowup_is_flagged() {
        let opts = OdeOptions { blowup_cap: 1e6, ..OdeOptions::tol(1e-8) };
        let tr = ode_solve(|_, y: &[f64; 1]| [y[0] * y[0]], 0.0, 2.0, [1.0], opts).unwrap();
        assert_eq!(tr.status, Termination::Blowup);
        assert!(tr.last_t() < 1.0);
    }

    #[test]
    fn stepper_lands_on_targets() {
        let mut st = Dopri::new(|_, y: &[f64; 1]| [-y[0]], 0.0, [1.0], OdeOptions::default());
        for k in 1..=10 {
            let t = k as f64 * 0.1;
            st.advance_to(t).unwrap();
            assert_eq!(st.t, t);
            assert!((st.y[0] - (-t).exp()).abs() < 1e-12);
        }
    }
}
