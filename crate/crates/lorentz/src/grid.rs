//! Radial grids on [0, R_max] carrying the space dimension.

use crate::LorentzError;

/// Volume of the unit ball in R^dim.
///
/// Computed by the exact recurrence c_1 = 2, c_2 = pi,
/// c_n = c_{n-2} * 2 pi / n, so no gamma-function evaluation is needed.
pub fn unit_ball_volume(dim: u32) -> f64 {
    assert!(dim >= 1, "dimension must be at least 1");
    let mut values = [0.0f64; 2];
    values[0] = 2.0; // c_1
    values[1] = std::f64::consts::PI; // c_2
    if dim <= 2 {
        return values[(dim - 1) as usize];
    }
    let mut c = values[if dim % 2 == 0 { 1 } else { 0 }];
    let mut n = if dim % 2 == 0 { 2 } else { 1 };
    while n < dim {
        n += 2;
        c *= 2.0 * std::f64::consts::PI / n as f64;
    }
    c
}

/// How a grid's nodes were laid out.  Only used for reporting; all
/// algorithms read the node list itself.
#[derive(Debug, Clone, PartialEq)]
pub enum GridSpacing {
    /// Uniform spacing `h_inner` on [0, inner_extent], then geometrically
    /// growing cells with the given ratio out to the last node.
    UniformGeometric {
        h_inner: f64,
        inner_extent: f64,
        ratio: f64,
    },
    /// Arbitrary strictly increasing node list.
    Custom,
}

/// Strictly increasing nodes 0 = r_0 < r_1 < ... < r_M together with the
/// space dimension N >= 2.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    dim: u32,
    nodes: Vec<f64>,
    spacing: GridSpacing,
}

impl RadialGrid {
    /// Grid from an explicit node list; the first node must be 0 and the
    /// list strictly increasing.
    pub fn from_nodes(dim: u32, nodes: Vec<f64>) -> Result<Self, LorentzError> {
        if dim < 2 {
            return Err(LorentzError::Grid(format!(
                "dimension must be >= 2, got {dim}"
            )));
        }
        if nodes.len() < 2 {
            return Err(LorentzError::Grid("need at least two nodes".into()));
        }
        if nodes[0] != 0.0 {
            return Err(LorentzError::Grid(format!(
                "first node must be 0, got {}",
                nodes[0]
            )));
        }
        for w in nodes.windows(2) {
            if !(w[1] > w[0]) || !w[1].is_finite() {
                return Err(LorentzError::Grid(format!(
                    "nodes must be finite and strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self {
            dim,
            nodes,
            spacing: GridSpacing::Custom,
        })
    }

    /// Uniform spacing `h_inner` on [0, inner_extent], then cells growing
    /// geometrically by `ratio` (restricted to [1, 1.1]) until `r_max` is
    /// reached.  The last node may overshoot `r_max` by up to one cell so
    /// that the spacing ratio stays exact.
    pub fn uniform_geometric(
        dim: u32,
        h_inner: f64,
        inner_extent: f64,
        ratio: f64,
        r_max: f64,
    ) -> Result<Self, LorentzError> {
        if !(h_inner > 0.0 && h_inner.is_finite()) {
            return Err(LorentzError::Grid(format!("bad inner spacing {h_inner}")));
        }
        if !(inner_extent > 0.0 && r_max >= inner_extent && r_max.is_finite()) {
            return Err(LorentzError::Grid(format!(
                "need 0 < inner_extent <= r_max, got {inner_extent}, {r_max}"
            )));
        }
        if !(1.0..=1.1).contains(&ratio) {
            return Err(LorentzError::Grid(format!(
                "outer spacing ratio must lie in [1, 1.1], got {ratio}"
            )));
        }
        let n_inner = (inner_extent / h_inner).round().max(1.0) as usize;
        let h = inner_extent / n_inner as f64;
        let mut nodes: Vec<f64> = (0..=n_inner).map(|i| i as f64 * h).collect();
        let mut step = h;
        let mut r = inner_extent;
        while r < r_max {
            step *= ratio;
            r += step;
            nodes.push(r);
        }
        let mut grid = Self::from_nodes(dim, nodes)?;
        grid.spacing = GridSpacing::UniformGeometric {
            h_inner: h,
            inner_extent,
            ratio,
        };
        Ok(grid)
    }

    /// Copy of the grid with a hairline node pair inserted at each radius
    /// in `jumps`, so indicator edges at those radii are representable as
    /// piecewise-linear ramps of relative width `JUMP_WIDTH_REL`.
    pub fn with_jump_nodes(&self, jumps: &[f64]) -> Result<Self, LorentzError> {
        self.with_ramp_nodes(jumps, crate::JUMP_WIDTH_REL)
    }

    /// Copy of the grid with a node pair of relative width `rel_width`
    /// inserted at each radius in `jumps`.  Quadrature wants the width
    /// as small as possible, but stiffness matrices built on the grid
    /// carry a 1/width flux coefficient, so solvers should insert wider
    /// ramps than the measurement default.
    pub fn with_ramp_nodes(&self, jumps: &[f64], rel_width: f64) -> Result<Self, LorentzError> {
        if !(rel_width > 0.0 && rel_width < 1e-2) {
            return Err(LorentzError::Grid(format!(
                "relative ramp width must lie in (0, 1e-2), got {rel_width}"
            )));
        }
        let mut nodes = self.nodes.clone();
        for &r in jumps {
            if !(r > 0.0 && r < self.r_max()) {
                return Err(LorentzError::Grid(format!(
                    "jump radius {r} outside (0, {})",
                    self.r_max()
                )));
            }
            nodes.push(r);
            nodes.push(r * (1.0 + rel_width));
        }
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        nodes.dedup();
        let mut grid = Self::from_nodes(self.dim, nodes)?;
        grid.spacing = GridSpacing::Custom;
        Ok(grid)
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn r_max(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    pub fn spacing(&self) -> &GridSpacing {
        &self.spacing
    }

    /// Volume of the ball of radius r in the grid's dimension.
    pub fn ball_volume(&self, r: f64) -> f64 {
        unit_ball_volume(self.dim) * r.powi(self.dim as i32)
    }

    /// Index of the last node <= r, assuming 0 <= r <= r_max.
    pub fn cell_index(&self, r: f64) -> usize {
        match self
            .nodes
            .binary_search_by(|x| x.partial_cmp(&r).unwrap())
        {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        }
    }
}
