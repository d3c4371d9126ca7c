//! Rectangular discretization of the feasible quadrant.

use serde::{Deserialize, Serialize};

use crate::ces::ResourceBundle;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const DEFAULT_NODE_CAP: usize = 250_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridScale {
    #[serde(alias = "lin")]
    Linear,
    #[serde(rename = "log", alias = "logarithmic")]
    Logarithmic,
}

impl GridScale {
    pub fn as_str(self) -> &'static str {
        match self {
            GridScale::Linear => "linear",
            GridScale::Logarithmic => "log",
        }
    }
}

/// `nK × nL` nodes over `[kMin, kMax] × [lMin, lMax]`.
///
/// Nodes are indexed row-major over capital: `index = i·nL + j` for
/// `(K_i, L_j)`. With logarithmic spacing and equal windows, `K_i == L_i`
/// exactly, so rays `L = ρK` with `ρ = L_j/K_i` pass through many nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec<T> {
    k_min: T,
    k_max: T,
    l_min: T,
    l_max: T,
    n_k: usize,
    n_l: usize,
    scale: GridScale,
}

/// Result of snapping a bundle to its nearest node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snap<T> {
    pub index: usize,
    pub node: ResourceBundle<T>,
    /// Euclidean distance in `(K, L)` between the query and the node.
    pub distance: T,
}

impl<T: Scalar> GridSpec<T> {
    pub fn new(
        (k_min, k_max): (T, T),
        (l_min, l_max): (T, T),
        (n_k, n_l): (usize, usize),
        scale: GridScale,
    ) -> Result<Self> {
        Self::with_cap(
            (k_min, k_max),
            (l_min, l_max),
            (n_k, n_l),
            scale,
            DEFAULT_NODE_CAP,
        )
    }

    pub fn with_cap(
        (k_min, k_max): (T, T),
        (l_min, l_max): (T, T),
        (n_k, n_l): (usize, usize),
        scale: GridScale,
        cap: usize,
    ) -> Result<Self> {
        let zero = T::zero();
        let finite = [k_min, k_max, l_min, l_max].iter().all(|v| v.is_finite());
        if !(finite && k_min > zero && k_min < k_max) {
            return Err(Error::InvalidGrid("need 0 < kMin < kMax".into()));
        }
        if !(l_min > zero && l_min < l_max) {
            return Err(Error::InvalidGrid("need 0 < lMin < lMax".into()));
        }
        if n_k < 2 || n_l < 2 {
            return Err(Error::InvalidGrid("need at least 2 points per axis".into()));
        }
        let nodes = n_k.saturating_mul(n_l);
        if nodes > cap {
            return Err(Error::GridTooLarge { nodes, cap });
        }
        Ok(Self {
            k_min,
            k_max,
            l_min,
            l_max,
            n_k,
            n_l,
            scale,
        })
    }

    /// Square log grid `[lo, hi]²` with `n × n` nodes.
    pub fn square_log(lo: T, hi: T, n: usize) -> Result<Self> {
        Self::new((lo, hi), (lo, hi), (n, n), GridScale::Logarithmic)
    }

    pub fn k_range(&self) -> (T, T) {
        (self.k_min, self.k_max)
    }

    pub fn l_range(&self) -> (T, T) {
        (self.l_min, self.l_max)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_k, self.n_l)
    }

    pub fn scale(&self) -> GridScale {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.n_k * self.n_l
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn k_values(&self) -> Vec<T> {
        axis(self.k_min, self.k_max, self.n_k, self.scale)
    }

    pub fn l_values(&self) -> Vec<T> {
        axis(self.l_min, self.l_max, self.n_l, self.scale)
    }

    pub fn nodes(&self) -> Vec<ResourceBundle<T>> {
        let ks = self.k_values();
        let ls = self.l_values();
        ks.iter()
            .flat_map(|&k| {
                ls.iter().map(move |&l| ResourceBundle {
                    capital: k,
                    labor: l,
                })
            })
            .collect()
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_l + j
    }

    pub fn node(&self, index: usize) -> ResourceBundle<T> {
        let (i, j) = (index / self.n_l, index % self.n_l);
        ResourceBundle {
            capital: axis_value(self.k_min, self.k_max, self.n_k, i, self.scale),
            labor: axis_value(self.l_min, self.l_max, self.n_l, j, self.scale),
        }
    }

    pub fn contains(&self, x: &ResourceBundle<T>) -> bool {
        x.capital >= self.k_min
            && x.capital <= self.k_max
            && x.labor >= self.l_min
            && x.labor <= self.l_max
    }

    /// Nearest node, per axis in the grid's own spacing (log spacing snaps in log space).
    pub fn nearest(&self, x: &ResourceBundle<T>) -> Result<Snap<T>> {
        if !self.contains(x) {
            return Err(Error::OutsideWindow {
                k: x.capital.to_f64_lossy(),
                l: x.labor.to_f64_lossy(),
            });
        }
        let i = nearest_step(self.k_min, self.k_max, self.n_k, x.capital, self.scale);
        let j = nearest_step(self.l_min, self.l_max, self.n_l, x.labor, self.scale);
        let index = self.index(i, j);
        let node = self.node(index);
        let distance = (x.capital - node.capital).hypot(x.labor - node.labor);
        Ok(Snap {
            index,
            node,
            distance,
        })
    }
}

fn axis<T: Scalar>(lo: T, hi: T, n: usize, scale: GridScale) -> Vec<T> {
    (0..n).map(|i| axis_value(lo, hi, n, i, scale)).collect()
}

fn axis_value<T: Scalar>(lo: T, hi: T, n: usize, i: usize, scale: GridScale) -> T {
    if i == 0 {
        return lo;
    }
    if i + 1 == n {
        return hi;
    }
    let t = T::lit(i as f64) / T::lit((n - 1) as f64);
    match scale {
        GridScale::Linear => lo + (hi - lo) * t,
        GridScale::Logarithmic => (lo.ln() + (hi.ln() - lo.ln()) * t).exp(),
    }
}

fn nearest_step<T: Scalar>(lo: T, hi: T, n: usize, v: T, scale: GridScale) -> usize {
    let t = match scale {
        GridScale::Linear => (v - lo) / (hi - lo),
        GridScale::Logarithmic => (v.ln() - lo.ln()) / (hi.ln() - lo.ln()),
    };
    let steps = T::lit((n - 1) as f64);
    let raw = (t * steps).round().to_f64_lossy();
    (raw.max(0.0) as usize).min(n - 1)
}
