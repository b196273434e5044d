/// C₀ = ½(2π)^{−d/2}, the normalization of the leading parametrix term.
pub fn c0_constant(d: usize) -> f64 {
    0.5 * (2.0 * std::f64::consts::PI).powf(-(d as f64) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn values() {
        assert!((c0_constant(1) - 1.0 / (2.0 * (2.0 * PI).sqrt())).abs() < 1e-16);
        assert!((c0_constant(2) - 1.0 / (4.0 * PI)).abs() < 1e-16);
        for d in 1..10 {
            assert!(c0_constant(d) > 0.0 && c0_constant(d + 1) < c0_constant(d));
        }
    }
}
