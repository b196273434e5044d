//! The renormalized cusp contribution for d = 1, evaluated through the
//! reduced one-dimensional integrals of the renormalization argument.

use std::f64::consts::{LN_2, PI};
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::constants::c_d_constant;
use super::lattice::{gamma_lattice, Lattice};
use crate::analysis::psi::TestFunctionPsi;
use crate::analysis::quad::{integrate_panels, QuadratureSpec};
use crate::analysis::special::EULER_GAMMA;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspTermResult {
    pub t: f64,
    pub value: f64,
    /// −(T/π) log T + 𝒞₁(Λ) T/π.
    pub predicted: f64,
    pub residual: f64,
}

/// Panels of a quarter period of sin(Tt) over [0, end].
pub(crate) fn oscillation_panels(t: f64, end: f64) -> Vec<f64> {
    let n = ((end * t / (PI / 2.0)).ceil() as usize).clamp(8, 400_000);
    (0..=n).map(|i| end * i as f64 / n as f64).collect()
}

/// −(1/2)∫₀^{1/A} ψ′(t) log(cosh t − 1) dt, the term carrying T log T.
pub fn cusp_log_integral(psi: &TestFunctionPsi, spec: &QuadratureSpec) -> Result<f64> {
    let f = |t: f64| {
        if t == 0.0 {
            return 0.0;
        }
        let s = (0.5 * t).sinh();
        psi.derivative(1, t) * (LN_2 + 2.0 * s.ln())
    };
    let v = integrate_panels(f, &oscillation_panels(psi.cutoff_t, psi.support()), spec)
        .into_result("cusp log integral")?;
    Ok(-0.5 * v)
}

/// −(1/π)∫₀^∞ d/dt{sin(Tt)/t·ρ(At)} log sinh(t/2) dt, whose asymptotics are
/// −(T/π)log(2T) + (1−γ)T/π + O(1).
pub fn sinh_log_integral(psi: &TestFunctionPsi, spec: &QuadratureSpec) -> Result<f64> {
    let f = |t: f64| if t == 0.0 { 0.0 } else { psi.derivative(1, t) * (0.5 * t).sinh().ln() };
    let v = integrate_panels(f, &oscillation_panels(psi.cutoff_t, psi.support()), spec)
        .into_result("sinh log integral")?;
    // ψ′ already carries the 1/π.
    Ok(-v)
}

/// Cusp contribution with y₀ = 0:
/// ψ(0)(½ log 2 + γ(Λ) + 𝒞(1)) − ½∫ψ′(t) log(cosh t − 1) dt.
pub fn cusp_term(psi: &TestFunctionPsi, l: &Lattice, d: usize) -> Result<CuspTermResult> {
    if d != 1 || l.dimension() != 1 {
        return Err(Error::UnsupportedDimension(d.max(l.dimension())));
    }
    let t = psi.cutoff_t;
    if t < 10.0 {
        return Err(Error::Precondition(format!("cusp term needs T ≥ 10, got {t}")));
    }
    let gamma = gamma_lattice(l, 2000.0)?.value;
    let cd = c_d_constant(d)?;
    let spec = QuadratureSpec::default().with_abs(1e-12);
    let psi0 = psi.eval(0.0);
    let value = psi0 * (0.5 * LN_2 + gamma + cd) + cusp_log_integral(psi, &spec)?;
    let c1 = 1.0 + cd + gamma - EULER_GAMMA;
    let predicted = -(t / PI) * t.ln() + c1 * t / PI;
    Ok(CuspTermResult { t, value, predicted, residual: value - predicted })
}

/// Writes rows as CSV with a header naming each column.
pub fn write_cusp_csv<W: Write>(rows: &[CuspTermResult], out: W) -> Result<()> {
    let mut w = out;
    writeln!(w, "T,value,predicted,residual").map_err(|e| Error::Io(e.to_string()))?;
    for r in rows {
        writeln!(w, "{},{:.12e},{:.12e},{:.12e}", r.t, r.value, r.predicted, r.residual)
            .map_err(|e| Error::Io(e.to_string()))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn psi(t: f64) -> TestFunctionPsi {
        TestFunctionPsi::new(t, 1.0 / t.ln()).unwrap()
    }

    #[test]
    fn residuals_stay_bounded() {
        let mut res = Vec::new();
        for t in [50.0, 100.0, 200.0, 400.0] {
            let r = cusp_term(&psi(t), &Lattice::integer(1), 1).unwrap();
            res.push(r.residual.abs());
        }
        let mut sorted = res.clone();
        sorted.sort_by(f64::total_cmp);
        let median = 0.5 * (sorted[1] + sorted[2]);
        assert!(res[3] <= 2.0 * median, "{res:?}");
        assert!(res.iter().all(|r| *r < 0.05), "{res:?}");
    }

    #[test]
    fn sinh_log_asymptotics() {
        let mut res = Vec::new();
        for t in [50.0, 100.0, 200.0, 400.0] {
            let v = sinh_log_integral(&psi(t), &QuadratureSpec::default().with_abs(1e-12)).unwrap();
            let pred = -(t / PI) * (2.0 * t).ln() + (1.0 - EULER_GAMMA) * t / PI;
            res.push((v - pred).abs());
        }
        assert!(res.iter().all(|r| *r < 1.0), "{res:?}");
    }

    #[test]
    fn higher_dimension_is_unsupported() {
        assert!(matches!(
            cusp_term(&psi(50.0), &Lattice::integer(2), 2),
            Err(Error::UnsupportedDimension(2))
        ));
    }
}
