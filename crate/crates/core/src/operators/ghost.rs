use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// How ghost values beyond one end of a line are produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FillPolicy {
    /// Wrap around.
    Periodic,
    /// Odd reflection about the boundary value `left`/`right`, the boundary
    /// sitting half a spacing outside the first/last value.
    Dirichlet { left: f64, right: f64 },
    /// Polynomial extrapolation of the given degree through the nearest
    /// `degree + 1` interior values.
    Extrapolate { degree: usize },
}

/// Returns `values` extended by `width` ghosts on each side.
pub fn ghost_fill(values: &[f64], width: usize, policy: FillPolicy) -> Result<Vec<f64>> {
    let n = values.len();
    if n == 0 {
        return Err(Error::FieldTooShort { len: 0, needed: 1 });
    }
    let mut out = vec![0.0; n + 2 * width];
    out[width..width + n].copy_from_slice(values);
    fill_in_place(&mut out, width, policy)?;
    Ok(out)
}

/// Fills the `width` ghosts at both ends of an already padded line.
pub fn fill_in_place(line: &mut [f64], width: usize, policy: FillPolicy) -> Result<()> {
    let n = line.len() - 2 * width;
    match policy {
        FillPolicy::Periodic => {
            for k in 0..width {
                line[width - 1 - k] = line[width + (n - 1 - k % n)];
                line[width + n + k] = line[width + k % n];
            }
        }
        FillPolicy::Dirichlet { left, right } => {
            if width > n {
                return Err(Error::FieldTooShort { len: n, needed: width });
            }
            for k in 0..width {
                line[width - 1 - k] = 2.0 * left - line[width + k];
                line[width + n + k] = 2.0 * right - line[width + n - 1 - k];
            }
        }
        FillPolicy::Extrapolate { degree } => {
            if degree + 1 > n {
                return Err(Error::FieldTooShort { len: n, needed: degree + 1 });
            }
            for k in 1..=width {
                let x = -(k as f64);
                let mut l = 0.0;
                let mut r = 0.0;
                for a in 0..=degree {
                    let mut basis = 1.0;
                    for b in 0..=degree {
                        if a != b {
                            basis *= (x - b as f64) / (a as f64 - b as f64);
                        }
                    }
                    l += basis * line[width + a];
                    r += basis * line[width + n - 1 - a];
                }
                line[width - k] = l;
                line[width + n - 1 + k] = r;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_wrap() {
        let e = ghost_fill(&[1.0, 2.0, 3.0, 4.0], 2, FillPolicy::Periodic).unwrap();
        assert_eq!(e, vec![3.0, 4.0, 1.0, 2.0, 3.0, 4.0, 1.0, 2.0]);
    }

    #[test]
    fn periodic_wider_than_line() {
        let e = ghost_fill(&[1.0, 2.0], 3, FillPolicy::Periodic).unwrap();
        assert_eq!(e, vec![2.0, 1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0]);
    }

    #[test]
    fn dirichlet_reflects_odd() {
        let e = ghost_fill(&[1.0, 2.0, 3.0], 2, FillPolicy::Dirichlet { left: 0.0, right: 1.0 })
            .unwrap();
        assert_eq!(e, vec![-2.0, -1.0, 1.0, 2.0, 3.0, -1.0, 0.0]);
    }

    #[test]
    fn extrapolation_is_exact_for_its_degree() {
        let v: Vec<f64> = (0..6).map(|i| 2.0 + 0.5 * i as f64).collect();
        let e = ghost_fill(&v, 3, FillPolicy::Extrapolate { degree: 1 }).unwrap();
        for (k, x) in e.iter().enumerate() {
            assert!((x - (2.0 + 0.5 * (k as f64 - 3.0))).abs() < 1e-12);
        }
        let v: Vec<f64> = (0..6).map(|i| (i * i) as f64).collect();
        let e = ghost_fill(&v, 2, FillPolicy::Extrapolate { degree: 2 }).unwrap();
        assert!((e[0] - 4.0).abs() < 1e-12 && (e[9] - 49.0).abs() < 1e-12);
    }
}
