use crate::error::{Error, Result};

/// Least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Result<SlopeFit> {
    if points.len() < 2 {
        return Err(Error::DegenerateFit(format!("need at least 2 points, got {}", points.len())));
    }
    for &(x, y) in points {
        for v in [x, y] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::NonPositiveValue(v));
            }
        }
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = logs.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::DegenerateFit("all x values are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    // A flat response is fit exactly by a horizontal line.
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(SlopeFit { slope, intercept, r_squared })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 5.0, 10.0].iter().map(|&x: &f64| (x, E * x.powi(3))).collect();
        let fit = fit_loglog_slope(&pts).unwrap();
        assert!((fit.slope - 3.0).abs() < 1e-12);
        assert!((fit.intercept - 1.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_points() {
        let fit = fit_loglog_slope(&[(1.0, E), (E, E * E)]).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        assert!(matches!(fit_loglog_slope(&[(1.0, 0.0), (2.0, 1.0)]), Err(Error::NonPositiveValue(_))));
        assert!(matches!(fit_loglog_slope(&[(-1.0, 1.0), (2.0, 1.0)]), Err(Error::NonPositiveValue(_))));
        assert!(matches!(fit_loglog_slope(&[(3.0, 1.0), (3.0, 2.0)]), Err(Error::DegenerateFit(_))));
        assert!(matches!(fit_loglog_slope(&[(3.0, 1.0)]), Err(Error::DegenerateFit(_))));
    }
}
