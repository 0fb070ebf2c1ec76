use crate::error::{Error, Result};

/// Interior nodes and dense derivative matrices (row-major) for homogeneous
/// Dirichlet conditions at both ends.
#[derive(Clone, Debug, PartialEq)]
pub struct Operators {
    pub nodes: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
}

impl Operators {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

pub trait Scheme: Send + Sync {
    fn name(&self) -> &'static str;
    fn operators(&self, z_min: f64, z_max: f64, n: usize) -> Operators;
}

/// Second-order central differences on a uniform grid.
pub struct FiniteDifference;

impl Scheme for FiniteDifference {
    fn name(&self) -> &'static str {
        "fd"
    }

    fn operators(&self, z_min: f64, z_max: f64, n: usize) -> Operators {
        let h = (z_max - z_min) / (n + 1) as f64;
        let nodes = (0..n).map(|i| z_min + (i + 1) as f64 * h).collect();
        let mut d1 = vec![0.0; n * n];
        let mut d2 = vec![0.0; n * n];
        for i in 0..n {
            d2[i * n + i] = -2.0 / (h * h);
            if i > 0 {
                d1[i * n + i - 1] = -0.5 / h;
                d2[i * n + i - 1] = 1.0 / (h * h);
            }
            if i + 1 < n {
                d1[i * n + i + 1] = 0.5 / h;
                d2[i * n + i + 1] = 1.0 / (h * h);
            }
        }
        Operators { nodes, d1, d2 }
    }
}

/// Collocation at the interior Chebyshev-Gauss-Lobatto points.
pub struct Chebyshev;

impl Scheme for Chebyshev {
    fn name(&self) -> &'static str {
        "cheb"
    }

    fn operators(&self, z_min: f64, z_max: f64, n: usize) -> Operators {
        let m = n + 1;
        let x: Vec<f64> = (0..=m)
            .map(|j| (std::f64::consts::PI * j as f64 / m as f64).cos())
            .collect();
        let c = |j: usize| if j == 0 || j == m { 2.0 } else { 1.0 } * if j.is_multiple_of(2) { 1.0 } else { -1.0 };
        let size = m + 1;
        let mut d = vec![0.0; size * size];
        for i in 0..size {
            let mut row_sum = 0.0;
            for j in 0..size {
                if i != j {
                    let v = c(i) / c(j) / (x[i] - x[j]);
                    d[i * size + j] = v;
                    row_sum += v;
                }
            }
            d[i * size + i] = -row_sum;
        }
        let scale = 2.0 / (z_max - z_min);
        let mut d1 = vec![0.0; n * n];
        let mut d2 = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                d1[i * n + j] = scale * d[(i + 1) * size + j + 1];
                let mut acc = 0.0;
                for k in 0..size {
                    acc += d[(i + 1) * size + k] * d[k * size + j + 1];
                }
                d2[i * n + j] = scale * scale * acc;
            }
        }
        let nodes = (1..=n).map(|j| z_min + (x[j] + 1.0) / scale).collect();
        Operators { nodes, d1, d2 }
    }
}

/// Name-indexed discretization schemes.
pub struct SchemeRegistry {
    schemes: Vec<Box<dyn Scheme>>,
}

impl Default for SchemeRegistry {
    fn default() -> Self {
        let mut r = SchemeRegistry {
            schemes: Vec::new(),
        };
        r.register(Box::new(FiniteDifference));
        r.register(Box::new(Chebyshev));
        r
    }
}

impl SchemeRegistry {
    pub fn register(&mut self, scheme: Box<dyn Scheme>) {
        self.schemes.retain(|s| s.name() != scheme.name());
        self.schemes.push(scheme);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.schemes.iter().map(|s| s.name()).collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn Scheme> {
        self.schemes
            .iter()
            .find(|s| s.name() == name)
            .map(|s| s.as_ref())
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "scheme",
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }
}
