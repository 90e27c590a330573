//! Field values over a window of lattice nodes, with provenance.

use num_complex::Complex64;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
pub struct FieldTable {
    pub method: String,
    pub k: Complex64,
    pub phi_in: Option<f64>,
    /// Free-form numerical parameters, in insertion order.
    pub params: Vec<(String, String)>,
    entries: BTreeMap<(i32, i32), Complex64>,
    pub max_stencil_residual: Option<f64>,
    pub max_boundary_residual: Option<f64>,
}

impl FieldTable {
    pub fn new(method: &str, k: Complex64, phi_in: Option<f64>) -> Self {
        Self {
            method: method.to_string(),
            k,
            phi_in,
            params: Vec::new(),
            entries: BTreeMap::new(),
            max_stencil_residual: None,
            max_boundary_residual: None,
        }
    }

    pub fn push(&mut self, m: i32, n: i32, v: Complex64) {
        self.entries.insert((m, n), v);
    }

    pub fn param(&mut self, key: &str, value: String) {
        self.params.push((key.to_string(), value));
    }

    pub fn get(&self, m: i32, n: i32) -> Option<Complex64> {
        self.entries.get(&(m, n)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries ordered by `(m, n)`.
    pub fn entries(&self) -> impl Iterator<Item = (i32, i32, Complex64)> + '_ {
        self.entries.iter().map(|(&(m, n), &v)| (m, n, v))
    }

    /// Largest `|stencil - source|` over nodes whose four neighbours are
    /// present and which `skip` does not exclude.
    pub fn stencil_residual(
        &self,
        shift: Complex64,
        source: impl Fn(i32, i32) -> Complex64,
        skip: impl Fn(i32, i32) -> bool,
    ) -> f64 {
        let mut worst: f64 = 0.0;
        for (&(m, n), &u) in &self.entries {
            if skip(m, n) {
                continue;
            }
            let nb = [(m + 1, n), (m - 1, n), (m, n + 1), (m, n - 1)];
            let vals: Option<Vec<Complex64>> = nb.iter().map(|&(a, b)| self.get(a, b)).collect();
            if let Some(vals) = vals {
                let s: Complex64 = vals.iter().sum();
                worst = worst.max((s + shift * u - source(m, n)).norm());
            }
        }
        worst
    }

    /// Largest `|u|` over the nodes selected by `on_boundary`.
    pub fn boundary_residual(&self, on_boundary: impl Fn(i32, i32) -> bool) -> f64 {
        self.entries
            .iter()
            .filter(|(&(m, n), _)| on_boundary(m, n))
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_of_a_plane_wave_table_vanishes() {
        let x = Complex64::new(0.3, 0.2);
        let y = Complex64::new(0.5, -0.1);
        // Pick K^2 - 4 so that x^m y^n solves the stencil.
        let shift = -(x + 1.0 / x + y + 1.0 / y);
        let mut t = FieldTable::new("test", Complex64::new(1.0, 0.1), None);
        for m in -3..=3 {
            for n in -3..=3 {
                t.push(m, n, x.powi(m) * y.powi(n));
            }
        }
        let r = t.stencil_residual(shift, |_, _| Complex64::new(0.0, 0.0), |_, _| false);
        assert!(r < 1e-12);
        assert_eq!(t.len(), 49);
    }
}
