//! Digital pheromone field: a dense C×C intensity grid with per-tick
//! diffusion and evaporation.
//!
//! Each tick, every cell sheds the fraction δ of its intensity equally to
//! its 8 neighbors and keeps `1 − δ`; deposits made since the last step are
//! added undiffused; the whole bracket is then scaled by the retention
//! factor ε:
//!
//! ```text
//! p(t) = ε · [ (1−δ)·p(t−1) + Δp + (δ/8)·Σ neighbors p(t−1) ]
//! ```
//!
//! Shares that would flow off-grid or into an obstacle cell are destroyed.
//! The update is synchronous: the kernel reads only the t−1 snapshot, so
//! cell order never matters.

use thiserror::Error;

/// Grid cell coordinate, `(x, y)` with `x` the column.
pub type Cell = (usize, usize);

/// Diffusion/evaporation constants for the field kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldParams {
    /// δ: fraction shed to the 8 neighbors per tick, in [0,1].
    pub diffusion_rate: f64,
    /// ε: retention factor per tick, in [0,1]. Note this is `1 − loss`.
    pub evaporation_factor: f64,
    /// I: intensity released per deposit event.
    pub release_intensity: f64,
}

impl FieldParams {
    pub fn new(diffusion_rate: f64, evaporation_factor: f64, release_intensity: f64) -> Self {
        assert!((0.0..=1.0).contains(&diffusion_rate), "diffusion rate must be in [0,1]");
        assert!(
            (0.0..=1.0).contains(&evaporation_factor),
            "evaporation factor must be in [0,1]"
        );
        assert!(release_intensity > 0.0, "release intensity must be positive");
        FieldParams { diffusion_rate, evaporation_factor, release_intensity }
    }

    /// Build from simulation parameters; the published evaporation value is
    /// the fraction lost per tick, so retention is its complement.
    pub fn from_sim(p: &crate::params::SimParams) -> Self {
        FieldParams::new(p.stig_diffusion, 1.0 - p.stig_evaporation, p.stig_intensity)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum FieldError {
    #[error("cell ({0}, {1}) is out of bounds")]
    OutOfBounds(usize, usize),
    #[error("cell ({0}, {1}) is an obstacle cell")]
    Blocked(usize, usize),
    #[error("deposit amount {0} is negative")]
    NegativeAmount(f64),
}

/// Double-buffered scalar pheromone grid.
///
/// Deposits accumulate in a separate Δp layer until the next [`step`], so a
/// fresh deposit evaporates but does not diffuse on its first tick, matching
/// the dynamics above. Queries see `committed + pending`.
///
/// [`step`]: PheromoneField::step
#[derive(Debug, Clone)]
pub struct PheromoneField {
    width: usize,
    height: usize,
    current: Vec<f64>,
    pending: Vec<f64>,
    scratch: Vec<f64>,
    obstacles: Vec<bool>,
}

impl PheromoneField {
    pub fn new(width: usize, height: usize) -> Self {
        Self::with_obstacles(width, height, std::iter::empty())
    }

    /// Obstacle cells hold no pheromone and absorb inflow.
    pub fn with_obstacles(width: usize, height: usize, blocked: impl IntoIterator<Item = Cell>) -> Self {
        assert!(width > 0 && height > 0);
        let mut obstacles = vec![false; width * height];
        for (x, y) in blocked {
            assert!(x < width && y < height, "obstacle cell out of bounds");
            obstacles[y * width + x] = true;
        }
        PheromoneField {
            width,
            height,
            current: vec![0.0; width * height],
            pending: vec![0.0; width * height],
            scratch: vec![0.0; width * height],
            obstacles,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    fn idx(&self, (x, y): Cell) -> usize {
        y * self.width + x
    }

    fn in_bounds(&self, (x, y): Cell) -> bool {
        x < self.width && y < self.height
    }

    /// Current intensity at a cell, including deposits not yet stepped.
    pub fn intensity(&self, cell: Cell) -> f64 {
        assert!(self.in_bounds(cell), "cell out of bounds");
        self.current[self.idx(cell)] + self.pending[self.idx(cell)]
    }

    /// Overwrite the committed intensity of a cell. Setup/test hook; normal
    /// simulation flow only deposits.
    pub fn set(&mut self, cell: Cell, value: f64) -> Result<(), FieldError> {
        self.check_open(cell)?;
        if value < 0.0 {
            return Err(FieldError::NegativeAmount(value));
        }
        let i = self.idx(cell);
        self.current[i] = value;
        Ok(())
    }

    fn check_open(&self, cell: Cell) -> Result<(), FieldError> {
        if !self.in_bounds(cell) {
            return Err(FieldError::OutOfBounds(cell.0, cell.1));
        }
        if self.obstacles[self.idx(cell)] {
            return Err(FieldError::Blocked(cell.0, cell.1));
        }
        Ok(())
    }

    /// Add `amount` to a cell's pending deposits. Accumulates into Δp for the
    /// next step.
    pub fn deposit(&mut self, cell: Cell, amount: f64) -> Result<(), FieldError> {
        self.check_open(cell)?;
        if amount < 0.0 {
            return Err(FieldError::NegativeAmount(amount));
        }
        let i = self.idx(cell);
        self.pending[i] += amount;
        Ok(())
    }

    /// Advance the field one tick: diffuse, fold in deposits, evaporate.
    pub fn step(&mut self, params: &FieldParams) {
        let delta = params.diffusion_rate;
        let eps = params.evaporation_factor;
        let share = delta / 8.0;
        let w = self.width;
        let h = self.height;
        for y in 0..h {
            for x in 0..w {
                let i = y * w + x;
                if self.obstacles[i] {
                    self.scratch[i] = 0.0;
                    continue;
                }
                // Obstacle cells are invariantly zero, so summing them is a no-op.
                let mut inflow = 0.0;
                let x0 = x.saturating_sub(1);
                let x1 = (x + 1).min(w - 1);
                let y0 = y.saturating_sub(1);
                let y1 = (y + 1).min(h - 1);
                for ny in y0..=y1 {
                    for nx in x0..=x1 {
                        if nx == x && ny == y {
                            continue;
                        }
                        inflow += self.current[ny * w + nx];
                    }
                }
                self.scratch[i] =
                    eps * ((1.0 - delta) * self.current[i] + self.pending[i] + share * inflow);
            }
        }
        std::mem::swap(&mut self.current, &mut self.scratch);
        self.pending.fill(0.0);
    }

    /// Highest-intensity cell within Euclidean distance `radius` of a
    /// continuous position, if its intensity exceeds `threshold`. Cell
    /// positions are their centers. Ties break to lower x, then lower y.
    pub fn peak_within(&self, center: (f64, f64), radius: f64, threshold: f64) -> Option<Cell> {
        assert!(radius > 0.0, "radius must be positive");
        let x_lo = ((center.0 - radius).floor().max(0.0)) as usize;
        let y_lo = ((center.1 - radius).floor().max(0.0)) as usize;
        let x_hi = ((center.0 + radius).ceil().max(0.0) as usize).min(self.width.saturating_sub(1));
        let y_hi = ((center.1 + radius).ceil().max(0.0) as usize).min(self.height.saturating_sub(1));
        let mut best: Option<(Cell, f64)> = None;
        for x in x_lo..=x_hi {
            for y in y_lo..=y_hi {
                let cx = x as f64 + 0.5;
                let cy = y as f64 + 0.5;
                let d2 = (cx - center.0).powi(2) + (cy - center.1).powi(2);
                if d2 > radius * radius {
                    continue;
                }
                let v = self.intensity((x, y));
                match best {
                    Some((_, bv)) if v <= bv => {}
                    _ => best = Some(((x, y), v)),
                }
            }
        }
        match best {
            Some((cell, v)) if v > threshold => Some(cell),
            _ => None,
        }
    }

    /// Sum of all intensities, pending deposits included.
    pub fn total_mass(&self) -> f64 {
        self.current.iter().sum::<f64>() + self.pending.iter().sum::<f64>()
    }

    /// Write the committed intensities as a CSV matrix, one row per grid row
    /// (row-major), for offline visualization.
    pub fn write_snapshot<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        for y in 0..self.height {
            let row: Vec<String> =
                (0..self.width).map(|x| format!("{}", self.current[y * self.width + x])).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(delta: f64, eps: f64) -> FieldParams {
        FieldParams::new(delta, eps, 40_000.0)
    }

    #[test]
    fn deposit_accumulates_and_is_visible() {
        let mut f = PheromoneField::new(10, 10);
        f.deposit((5, 5), 40_000.0).unwrap();
        assert_eq!(f.intensity((5, 5)), 40_000.0);
        assert_eq!(f.intensity((4, 5)), 0.0);
        assert_eq!(f.total_mass(), 40_000.0);

        f.deposit((5, 5), 40_000.0).unwrap();
        assert_eq!(f.intensity((5, 5)), 80_000.0);
    }

    #[test]
    fn deposit_zero_is_identity() {
        let mut f = PheromoneField::new(10, 10);
        f.deposit((3, 3), 0.0).unwrap();
        assert_eq!(f.total_mass(), 0.0);
    }

    #[test]
    fn deposit_rejects_out_of_bounds_and_negative() {
        let mut f = PheromoneField::new(10, 10);
        assert_eq!(f.deposit((10, 0), 1.0), Err(FieldError::OutOfBounds(10, 0)));
        assert_eq!(f.deposit((0, 0), -1.0), Err(FieldError::NegativeAmount(-1.0)));
    }

    #[test]
    fn single_point_one_step() {
        // Committed intensity I at an interior cell, one step, no deposits:
        // center keeps eps*(1-delta)*I, each of the 8 neighbors gets eps*(delta/8)*I.
        let mut f = PheromoneField::new(11, 11);
        let i = 1000.0;
        let (delta, eps) = (0.85, 0.95);
        f.set((5, 5), i).unwrap();
        f.step(&params(delta, eps));
        assert!((f.intensity((5, 5)) - eps * (1.0 - delta) * i).abs() < 1e-9);
        for dx in -1i64..=1 {
            for dy in -1i64..=1 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let cell = ((5 + dx) as usize, (5 + dy) as usize);
                assert!((f.intensity(cell) - eps * delta / 8.0 * i).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn zero_field_is_fixed_point() {
        let mut f = PheromoneField::new(8, 8);
        f.step(&params(0.85, 0.95));
        assert_eq!(f.total_mass(), 0.0);
    }

    #[test]
    fn uniform_interior_scales_by_evaporation() {
        // Far from the boundary, diffusion in equals diffusion out, so a
        // uniform value p becomes eps*p.
        let mut f = PheromoneField::new(20, 20);
        for x in 0..20 {
            for y in 0..20 {
                f.set((x, y), 7.0).unwrap();
            }
        }
        let eps = 0.9;
        f.step(&params(0.6, eps));
        for x in 3..17 {
            for y in 3..17 {
                assert!(
                    (f.intensity((x, y)) - eps * 7.0).abs() < 1e-9,
                    "cell ({x},{y}) = {}",
                    f.intensity((x, y))
                );
            }
        }
    }

    #[test]
    fn no_diffusion_no_evaporation_is_identity() {
        let mut f = PheromoneField::new(10, 10);
        f.set((2, 3), 5.0).unwrap();
        f.set((9, 9), 1.5).unwrap();
        f.step(&params(0.0, 1.0));
        assert_eq!(f.intensity((2, 3)), 5.0);
        assert_eq!(f.intensity((9, 9)), 1.5);
        assert_eq!(f.total_mass(), 6.5);
    }

    #[test]
    fn fresh_deposit_evaporates_but_does_not_diffuse_on_first_step() {
        let mut f = PheromoneField::new(9, 9);
        f.deposit((4, 4), 100.0).unwrap();
        f.step(&params(0.85, 0.95));
        assert!((f.intensity((4, 4)) - 95.0).abs() < 1e-12);
        assert_eq!(f.intensity((3, 4)), 0.0);
    }

    #[test]
    fn interior_mass_law() {
        let mut f = PheromoneField::new(30, 30);
        f.set((15, 15), 1234.5).unwrap();
        f.set((14, 16), 99.0).unwrap();
        let eps = 0.95;
        let before = f.total_mass();
        f.step(&params(0.85, eps));
        assert!((f.total_mass() - eps * before).abs() / (eps * before) < 1e-9);
    }

    #[test]
    fn boundary_destroys_outflow() {
        // A corner cell has 3 neighbors; the other 5 shares vanish.
        let mut f = PheromoneField::new(5, 5);
        f.set((0, 0), 800.0).unwrap();
        let (delta, eps) = (0.8, 1.0);
        f.step(&params(delta, eps));
        assert!((f.intensity((0, 0)) - (1.0 - delta) * 800.0).abs() < 1e-9);
        // 3 in-bounds neighbors each receive delta/8 of 800
        for cell in [(1, 0), (0, 1), (1, 1)] {
            assert!((f.intensity(cell) - delta / 8.0 * 800.0).abs() < 1e-9);
        }
        let expected_mass = (1.0 - delta) * 800.0 + 3.0 * delta / 8.0 * 800.0;
        assert!((f.total_mass() - expected_mass).abs() < 1e-9);
    }

    #[test]
    fn obstacle_cells_absorb_and_stay_empty() {
        let mut f = PheromoneField::with_obstacles(7, 7, [(4, 3)]);
        f.set((3, 3), 800.0).unwrap();
        f.step(&params(0.8, 1.0));
        assert_eq!(f.intensity((4, 3)), 0.0);
        // share destined for the obstacle is destroyed, others delivered
        assert!((f.intensity((2, 3)) - 0.1 * 800.0).abs() < 1e-9);
        assert_eq!(f.deposit((4, 3), 1.0), Err(FieldError::Blocked(4, 3)));
    }

    #[test]
    fn peak_within_unique_max() {
        let mut f = PheromoneField::new(10, 10);
        f.set((3, 4), 12.0).unwrap();
        f.set((4, 4), 3.0).unwrap();
        assert_eq!(f.peak_within((4.0, 4.0), 2.0, 1.0), Some((3, 4)));
    }

    #[test]
    fn peak_within_all_below_threshold() {
        let mut f = PheromoneField::new(10, 10);
        f.set((3, 4), 0.5).unwrap();
        assert_eq!(f.peak_within((3.5, 4.5), 2.0, 1.0), None);
    }

    #[test]
    fn peak_within_tie_breaks_low_x_then_low_y() {
        let mut f = PheromoneField::new(10, 10);
        f.set((2, 7), 9.0).unwrap();
        f.set((6, 1), 9.0).unwrap();
        assert_eq!(f.peak_within((4.5, 4.5), 5.0, 1.0), Some((2, 7)));
        // and within a column, lower y wins
        let mut g = PheromoneField::new(10, 10);
        g.set((2, 7), 9.0).unwrap();
        g.set((2, 3), 9.0).unwrap();
        assert_eq!(g.peak_within((2.5, 5.0), 4.0, 1.0), Some((2, 3)));
    }

    #[test]
    fn snapshot_is_row_major_csv() {
        let mut f = PheromoneField::new(3, 2);
        f.set((1, 0), 2.5).unwrap();
        f.set((2, 1), 1.0).unwrap();
        let mut buf = Vec::new();
        f.write_snapshot(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0,2.5,0\n0,0,1\n");
    }
}
