//! Piecewise-linear radial profiles.

use std::sync::Arc;

use crate::{LorentzError, RadialGrid, JUMP_WIDTH_REL};

/// A radial function given by node values on a [`RadialGrid`],
/// interpolated linearly in r between nodes and extended by zero beyond
/// the last node.
#[derive(Debug, Clone)]
pub struct RadialFunction {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
}

impl RadialFunction {
    pub fn from_values(grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self, LorentzError> {
        if values.len() != grid.len() {
            return Err(LorentzError::Function(format!(
                "got {} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(LorentzError::Function("non-finite value".into()));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at the grid nodes.
    pub fn from_fn(grid: &Arc<RadialGrid>, f: impl Fn(f64) -> f64) -> Result<Self, LorentzError> {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self::from_values(Arc::clone(grid), values)
    }

    /// Indicator of the ball of radius `radius` with the given height, on
    /// a minimal dedicated grid.  The edge is a hairline ramp of relative
    /// width `JUMP_WIDTH_REL`, so norms agree with the sharp indicator to
    /// roughly that accuracy.
    pub fn ball_indicator(dim: u32, radius: f64, height: f64) -> Result<Self, LorentzError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(LorentzError::Function(format!("bad radius {radius}")));
        }
        let grid = RadialGrid::from_nodes(
            dim,
            vec![0.0, radius, radius * (1.0 + JUMP_WIDTH_REL)],
        )?;
        Self::from_values(Arc::new(grid), vec![height, height, 0.0])
    }

    /// Indicator of the annulus r_in <= |x| <= r_out, with hairline ramps
    /// at both edges.
    pub fn annulus_indicator(
        dim: u32,
        r_in: f64,
        r_out: f64,
        height: f64,
    ) -> Result<Self, LorentzError> {
        if !(r_in > 0.0 && r_out > r_in && r_out.is_finite()) {
            return Err(LorentzError::Function(format!(
                "bad annulus [{r_in}, {r_out}]"
            )));
        }
        let grid = RadialGrid::from_nodes(
            dim,
            vec![
                0.0,
                r_in * (1.0 - JUMP_WIDTH_REL),
                r_in,
                r_out,
                r_out * (1.0 + JUMP_WIDTH_REL),
            ],
        )?;
        Self::from_values(Arc::new(grid), vec![0.0, 0.0, height, height, 0.0])
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn dim(&self) -> u32 {
        self.grid.dim()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Point evaluation; zero beyond the last node.
    pub fn eval(&self, r: f64) -> f64 {
        let nodes = self.grid.nodes();
        if r < 0.0 || r > self.grid.r_max() {
            return 0.0;
        }
        let i = self.grid.cell_index(r);
        if i + 1 >= nodes.len() {
            return self.values[i];
        }
        let (r0, r1) = (nodes[i], nodes[i + 1]);
        let t = (r - r0) / (r1 - r0);
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Whether |f| is non-increasing as a function of r.  Needs both
    /// non-increasing node magnitudes and no strictly opposite-sign cell,
    /// since a sign change inside a cell kinks |f| upward there.  For
    /// such profiles the spherical rearrangement is |f| itself.
    pub fn is_nonincreasing_abs(&self) -> bool {
        self.values
            .windows(2)
            .all(|w| w[0] * w[1] >= 0.0 && w[1].abs() <= w[0].abs())
    }

    /// Pointwise absolute value.
    pub fn abs(&self) -> RadialFunction {
        RadialFunction {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
    }

    /// The dilation f(. / lambda) on the correspondingly scaled grid.
    pub fn scale_argument(&self, lambda: f64) -> Result<RadialFunction, LorentzError> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(LorentzError::Function(format!("bad dilation {lambda}")));
        }
        let nodes = self.grid.nodes().iter().map(|&r| r * lambda).collect();
        let grid = RadialGrid::from_nodes(self.grid.dim(), nodes)?;
        Ok(RadialFunction {
            grid: Arc::new(grid),
            values: self.values.clone(),
        })
    }

    /// Pointwise sum on the union of both node sets.  Exact for
    /// piecewise-linear summands since all breakpoints are kept.
    pub fn add(&self, other: &RadialFunction) -> Result<RadialFunction, LorentzError> {
        if self.dim() != other.dim() {
            return Err(LorentzError::Function("dimension mismatch".into()));
        }
        let mut nodes: Vec<f64> = self
            .grid
            .nodes()
            .iter()
            .chain(other.grid.nodes())
            .copied()
            .collect();
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        nodes.dedup();
        let grid = Arc::new(RadialGrid::from_nodes(self.dim(), nodes)?);
        let values = grid
            .nodes()
            .iter()
            .map(|&r| self.eval(r) + other.eval(r))
            .collect();
        Ok(RadialFunction { grid, values })
    }

    /// Restriction to the ball |x| <= rho (hairline ramp down at rho).
    pub fn restrict_inside(&self, rho: f64) -> Result<RadialFunction, LorentzError> {
        if !(rho > 0.0) {
            return Err(LorentzError::Function(format!("bad cutoff {rho}")));
        }
        if rho >= self.grid.r_max() {
            return Ok(self.clone());
        }
        let mut nodes: Vec<f64> = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        for (&r, &v) in self.grid.nodes().iter().zip(&self.values) {
            if r < rho {
                nodes.push(r);
                values.push(v);
            } else {
                break;
            }
        }
        nodes.push(rho);
        values.push(self.eval(rho));
        nodes.push(rho * (1.0 + JUMP_WIDTH_REL));
        values.push(0.0);
        let grid = Arc::new(RadialGrid::from_nodes(self.dim(), nodes)?);
        RadialFunction::from_values(grid, values)
    }

    /// Restriction to the outer region |x| >= rho (hairline ramp up at
    /// rho, zero inside).
    pub fn restrict_outside(&self, rho: f64) -> Result<RadialFunction, LorentzError> {
        if !(rho > 0.0) {
            return Err(LorentzError::Function(format!("bad cutoff {rho}")));
        }
        if rho >= self.grid.r_max() {
            let grid = RadialGrid::from_nodes(self.dim(), vec![0.0, rho.max(1.0)])?;
            return RadialFunction::from_values(Arc::new(grid), vec![0.0, 0.0]);
        }
        let lead = rho * (1.0 - JUMP_WIDTH_REL);
        let mut nodes = vec![0.0];
        let mut values = vec![0.0];
        if lead > 0.0 {
            nodes.push(lead);
            values.push(0.0);
        }
        nodes.push(rho);
        values.push(self.eval(rho));
        for (&r, &v) in self.grid.nodes().iter().zip(&self.values) {
            if r > rho {
                nodes.push(r);
                values.push(v);
            }
        }
        let grid = Arc::new(RadialGrid::from_nodes(self.dim(), nodes)?);
        RadialFunction::from_values(grid, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_interpolates_and_extends_by_zero() {
        let grid = Arc::new(RadialGrid::from_nodes(3, vec![0.0, 1.0, 2.0]).unwrap());
        let f = RadialFunction::from_values(grid, vec![2.0, 1.0, 0.0]).unwrap();
        assert_eq!(f.eval(0.0), 2.0);
        assert_eq!(f.eval(0.5), 1.5);
        assert_eq!(f.eval(2.0), 0.0);
        assert_eq!(f.eval(3.0), 0.0);
    }

    #[test]
    fn restrictions_split_the_function() {
        let grid = Arc::new(RadialGrid::from_nodes(3, vec![0.0, 1.0, 2.0, 3.0]).unwrap());
        let f = RadialFunction::from_values(grid, vec![3.0, 2.0, 1.0, 0.0]).unwrap();
        let inner = f.restrict_inside(1.5).unwrap();
        let outer = f.restrict_outside(1.5).unwrap();
        assert_eq!(inner.eval(1.0), 2.0);
        assert_eq!(inner.eval(1.6), 0.0);
        assert_eq!(outer.eval(1.0), 0.0);
        assert_eq!(outer.eval(2.0), 1.0);
        for r in [0.2, 0.9, 1.4, 1.7, 2.5] {
            assert!((inner.eval(r) + outer.eval(r) - f.eval(r)).abs() < 1e-9);
        }
    }
}
