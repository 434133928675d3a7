//! Benchmark worlds: file format, validation, and procedural generation of
//! the four scenarios (Field, Dumps, Urban, UrbanMines).
//!
//! Scenario files are TOML with top-level keys `name`, `grid_size`,
//! `clusters`, `targets` (list of `[x, y]`), `obstacles` (list of
//! `[x, y, kind]` with kind `"tree"` or `"building"`), `spawns` (list of
//! `[x, y, heading, flock]`) and a `[metadata]` census table. Cells are
//! integers; positions and headings are decimals.

use std::collections::HashSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::Cell;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObstacleKind {
    Tree,
    Building,
}

/// Initial drone placement: position, heading, flock tag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64, f64, u32)", into = "(f64, f64, f64, u32)")]
pub struct Spawn {
    pub x: f64,
    pub y: f64,
    pub heading: f64,
    pub flock: u32,
}

impl From<(f64, f64, f64, u32)> for Spawn {
    fn from((x, y, heading, flock): (f64, f64, f64, u32)) -> Self {
        Spawn { x, y, heading, flock }
    }
}

impl From<Spawn> for (f64, f64, f64, u32) {
    fn from(s: Spawn) -> Self {
        (s.x, s.y, s.heading, s.flock)
    }
}

/// Census used for validation. `targets`, `trees`, and `drones` must match
/// the entity lists; `clusters` and `buildings` count structures (a building
/// spans many obstacle cells) and are informational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub targets: usize,
    pub clusters: usize,
    pub trees: usize,
    pub buildings: usize,
    pub drones: usize,
}

/// One benchmark world, immutable after construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub grid_size: usize,
    pub targets: Vec<Cell>,
    pub obstacles: Vec<(usize, usize, ObstacleKind)>,
    pub spawns: Vec<Spawn>,
    pub metadata: Metadata,
}

/// The four built-in benchmark scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    Field,
    Dumps,
    Urban,
    UrbanMines,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 4] =
        [ScenarioKind::Field, ScenarioKind::Dumps, ScenarioKind::Urban, ScenarioKind::UrbanMines];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Field => "field",
            ScenarioKind::Dumps => "dumps",
            ScenarioKind::Urban => "urban",
            ScenarioKind::UrbanMines => "urban_mines",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "field" => Some(ScenarioKind::Field),
            "dumps" => Some(ScenarioKind::Dumps),
            "urban" => Some(ScenarioKind::Urban),
            "urban_mines" | "urbanmines" | "mines" => Some(ScenarioKind::UrbanMines),
            _ => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("syntax error: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("cell ({0}, {1}) out of bounds for grid size {2}")]
    OutOfBounds(usize, usize, usize),
    #[error("cell ({0}, {1}) is listed as both target and obstacle")]
    TargetObstacleOverlap(usize, usize),
    #[error("spawn at ({0}, {1}) lies inside an obstacle or out of bounds")]
    BadSpawn(f64, f64),
    #[error("metadata count mismatch for {0}: declared {1}, found {2}")]
    CountMismatch(&'static str, usize, usize),
    #[error("duplicate {0} cell ({1}, {2})")]
    Duplicate(&'static str, usize, usize),
    #[error("unknown scenario name `{0}`")]
    UnknownName(String),
}

impl Scenario {
    /// Parse and validate a scenario document.
    pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
        let s: Scenario = toml::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    /// Serialize to the scenario file format; `parse(serialize(s)) == s`.
    pub fn serialize(&self) -> String {
        toml::to_string(self).expect("scenario serialization cannot fail")
    }

    pub fn obstacle_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.obstacles.iter().map(|&(x, y, _)| (x, y))
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let c = self.grid_size;
        let mut target_set = HashSet::new();
        for &(x, y) in &self.targets {
            if x >= c || y >= c {
                return Err(ScenarioError::OutOfBounds(x, y, c));
            }
            if !target_set.insert((x, y)) {
                return Err(ScenarioError::Duplicate("target", x, y));
            }
        }
        let mut obstacle_set = HashSet::new();
        let mut trees = 0;
        for &(x, y, kind) in &self.obstacles {
            if x >= c || y >= c {
                return Err(ScenarioError::OutOfBounds(x, y, c));
            }
            if target_set.contains(&(x, y)) {
                return Err(ScenarioError::TargetObstacleOverlap(x, y));
            }
            if !obstacle_set.insert((x, y)) {
                return Err(ScenarioError::Duplicate("obstacle", x, y));
            }
            if kind == ObstacleKind::Tree {
                trees += 1;
            }
        }
        for s in &self.spawns {
            let inside = s.x >= 0.0 && s.y >= 0.0 && s.x < c as f64 && s.y < c as f64;
            if !inside || obstacle_set.contains(&(s.x as usize, s.y as usize)) {
                return Err(ScenarioError::BadSpawn(s.x, s.y));
            }
        }
        let m = &self.metadata;
        let checks = [
            ("targets", m.targets, self.targets.len()),
            ("trees", m.trees, trees),
            ("drones", m.drones, self.spawns.len()),
        ];
        for (what, declared, found) in checks {
            if declared != found {
                return Err(ScenarioError::CountMismatch(what, declared, found));
            }
        }
        Ok(())
    }

    /// Generate a built-in benchmark world, deterministically in `seed`.
    pub fn generate(kind: ScenarioKind, seed: u64) -> Scenario {
        let mut rng = rng::stream(seed, "scenario", kind as u64);
        let s = match kind {
            ScenarioKind::Field => generate_field(&mut rng),
            ScenarioKind::Dumps => generate_dumps(&mut rng),
            ScenarioKind::Urban => generate_urban(&mut rng),
            ScenarioKind::UrbanMines => generate_urban_mines(&mut rng),
        };
        debug_assert!(s.validate().is_ok());
        s
    }
}

const CLUSTER_RADIUS: f64 = 8.0;
const MIN_CENTROID_DIST: f64 = 40.0;
const FLOCK_SPAWN_RADIUS: f64 = 10.0;

fn random_cell(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> Cell {
    (rng.gen_range(lo..hi), rng.gen_range(lo..hi))
}

fn dist(a: Cell, b: Cell) -> f64 {
    let dx = a.0 as f64 - b.0 as f64;
    let dy = a.1 as f64 - b.1 as f64;
    dx.hypot(dy)
}

/// Cluster centroids drawn uniformly in the margin-inset square with a
/// minimum mutual distance.
fn place_centroids(rng: &mut ChaCha8Rng, c: usize, n: usize, margin: usize) -> Vec<Cell> {
    loop {
        let mut centroids: Vec<Cell> = Vec::with_capacity(n);
        let mut attempts = 0;
        while centroids.len() < n && attempts < 10_000 {
            attempts += 1;
            let cand = random_cell(rng, margin, c - margin);
            if centroids.iter().all(|&p| dist(p, cand) >= MIN_CENTROID_DIST) {
                centroids.push(cand);
            }
        }
        if centroids.len() == n {
            return centroids;
        }
    }
}

/// Scatter `count` distinct target cells within `CLUSTER_RADIUS` of the
/// centroid, avoiding forbidden cells.
fn scatter_cluster(
    rng: &mut ChaCha8Rng,
    c: usize,
    centroid: Cell,
    count: usize,
    taken: &mut HashSet<Cell>,
) -> Vec<Cell> {
    let mut cells = Vec::with_capacity(count);
    while cells.len() < count {
        let dx = rng.gen_range(-CLUSTER_RADIUS..=CLUSTER_RADIUS);
        let dy = rng.gen_range(-CLUSTER_RADIUS..=CLUSTER_RADIUS);
        if dx.hypot(dy) > CLUSTER_RADIUS {
            continue;
        }
        let x = centroid.0 as f64 + dx;
        let y = centroid.1 as f64 + dy;
        if x < 0.0 || y < 0.0 || x >= c as f64 || y >= c as f64 {
            continue;
        }
        let cell = (x as usize, y as usize);
        if taken.insert(cell) {
            cells.push(cell);
        }
    }
    cells
}

/// Four dense flocks in the corners of the area, random headings.
fn corner_flocks(rng: &mut ChaCha8Rng, c: usize, total_drones: usize) -> Vec<Spawn> {
    let m = 12.0;
    let anchors =
        [(m, m), (c as f64 - m, m), (m, c as f64 - m), (c as f64 - m, c as f64 - m)];
    let per_flock = total_drones / anchors.len();
    let remainder = total_drones % anchors.len();
    let mut spawns = Vec::with_capacity(total_drones);
    for (flock, &(ax, ay)) in anchors.iter().enumerate() {
        let n = per_flock + usize::from(flock < remainder);
        for _ in 0..n {
            let (px, py) = loop {
                let dx = rng.gen_range(-FLOCK_SPAWN_RADIUS..=FLOCK_SPAWN_RADIUS);
                let dy = rng.gen_range(-FLOCK_SPAWN_RADIUS..=FLOCK_SPAWN_RADIUS);
                if dx.hypot(dy) > FLOCK_SPAWN_RADIUS {
                    continue;
                }
                let px = (ax + dx).clamp(0.5, c as f64 - 0.5);
                let py = (ay + dy).clamp(0.5, c as f64 - 0.5);
                break (px, py);
            };
            spawns.push(Spawn { x: px, y: py, heading: rng.gen_range(0.0..360.0), flock: flock as u32 });
        }
    }
    spawns
}

/// Cells within `radius` of any corner flock anchor; obstacles keep out so
/// spawns are always obstacle-free.
fn near_corner(c: usize, cell: Cell, radius: f64) -> bool {
    let m = 12.0;
    let anchors =
        [(m, m), (c as f64 - m, m), (m, c as f64 - m), (c as f64 - m, c as f64 - m)];
    let (x, y) = (cell.0 as f64 + 0.5, cell.1 as f64 + 0.5);
    anchors.iter().any(|&(ax, ay)| (x - ax).hypot(y - ay) <= radius)
}

fn metadata(targets: usize, clusters: usize, trees: usize, buildings: usize, drones: usize) -> Metadata {
    Metadata { targets, clusters, trees, buildings, drones }
}

fn generate_field(rng: &mut ChaCha8Rng) -> Scenario {
    let c = 200;
    let centroids = place_centroids(rng, c, 5, 25);
    let mut taken = HashSet::new();
    let targets: Vec<Cell> =
        centroids.iter().flat_map(|&p| scatter_cluster(rng, c, p, 10, &mut taken)).collect();
    Scenario {
        name: "field".into(),
        grid_size: c,
        targets,
        obstacles: Vec::new(),
        spawns: corner_flocks(rng, c, 80),
        metadata: metadata(50, 5, 0, 0, 80),
    }
}

fn generate_dumps(rng: &mut ChaCha8Rng) -> Scenario {
    let c = 200;
    let centroids = place_centroids(rng, c, 3, 25);
    let mut taken = HashSet::new();
    let targets: Vec<Cell> =
        centroids.iter().flat_map(|&p| scatter_cluster(rng, c, p, 10, &mut taken)).collect();
    // 100 single-cell trees, clear of targets and the corner spawn areas
    let mut trees = Vec::with_capacity(100);
    while trees.len() < 100 {
        let cell = random_cell(rng, 0, c);
        if taken.contains(&cell) || near_corner(c, cell, FLOCK_SPAWN_RADIUS + 3.0) {
            continue;
        }
        taken.insert(cell);
        trees.push((cell.0, cell.1, ObstacleKind::Tree));
    }
    Scenario {
        name: "dumps".into(),
        grid_size: c,
        targets,
        obstacles: trees,
        spawns: corner_flocks(rng, c, 80),
        metadata: metadata(30, 3, 100, 0, 80),
    }
}

/// Axis-aligned building footprint.
#[derive(Clone, Copy)]
struct Rect {
    x: usize,
    y: usize,
    w: usize,
    h: usize,
}

impl Rect {
    fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        let (x0, y0, w, h) = (self.x, self.y, self.w, self.h);
        (0..h).flat_map(move |dy| (0..w).map(move |dx| (x0 + dx, y0 + dy)))
    }

    fn gap_from(&self, other: &Rect, gap: usize) -> bool {
        let sep_x = self.x + self.w + gap <= other.x || other.x + other.w + gap <= self.x;
        let sep_y = self.y + self.h + gap <= other.y || other.y + other.h + gap <= self.y;
        sep_x || sep_y
    }
}

/// Place `n` non-overlapping buildings in the central region, with a gap
/// wide enough for target strips and drone passage. The first `tall` of
/// them get a height of at least `min_tall` cells.
fn place_buildings(
    rng: &mut ChaCha8Rng,
    c: usize,
    n: usize,
    side: std::ops::RangeInclusive<usize>,
    margin: usize,
    gap: usize,
    tall: usize,
    min_tall: usize,
) -> Vec<Rect> {
    loop {
        let mut rects: Vec<Rect> = Vec::with_capacity(n);
        let mut attempts = 0;
        while rects.len() < n && attempts < 20_000 {
            attempts += 1;
            let w = rng.gen_range(side.clone());
            let h = if rects.len() < tall {
                rng.gen_range(min_tall..=*side.end())
            } else {
                rng.gen_range(side.clone())
            };
            if margin + w + gap >= c || margin + h + gap >= c {
                continue;
            }
            let x = rng.gen_range(margin..c - margin - w);
            let y = rng.gen_range(margin..c - margin - h);
            let cand = Rect { x, y, w, h };
            if rects.iter().all(|r| r.gap_from(&cand, gap)) {
                rects.push(cand);
            }
        }
        if rects.len() == n {
            return rects;
        }
    }
}

/// Target strip flush against one vertical face of a building: `depth`
/// columns × up to 14 rows, trimmed to `count` cells.
fn face_strip(rect: &Rect, east: bool, count: usize) -> Vec<Cell> {
    let len = rect.h.min(14);
    let depth = count.div_ceil(len);
    let mut cells = Vec::with_capacity(count);
    for d in 0..depth {
        for row in 0..len {
            if cells.len() == count {
                break;
            }
            let x = if east { rect.x + rect.w + d } else { rect.x - 1 - d };
            cells.push((x, rect.y + row));
        }
    }
    cells
}

fn generate_urban(rng: &mut ChaCha8Rng) -> Scenario {
    let c = 200;
    // first two buildings carry the target strips on opposite faces
    let rects = place_buildings(rng, c, 7, 10..=24, 40, 10, 2, 14);
    let targets: Vec<Cell> = face_strip(&rects[0], true, 55)
        .into_iter()
        .chain(face_strip(&rects[1], false, 55))
        .collect();
    let obstacles: Vec<(usize, usize, ObstacleKind)> = rects
        .iter()
        .flat_map(|r| r.cells().collect::<Vec<_>>())
        .map(|(x, y)| (x, y, ObstacleKind::Building))
        .collect();
    Scenario {
        name: "urban".into(),
        grid_size: c,
        targets,
        obstacles,
        spawns: corner_flocks(rng, c, 40),
        metadata: metadata(110, 2, 0, 7, 40),
    }
}

fn generate_urban_mines(rng: &mut ChaCha8Rng) -> Scenario {
    let c = 400;
    let rects = place_buildings(rng, c, 28, 6..=16, 25, 8, 0, 0);
    let mut blocked: HashSet<Cell> = rects.iter().flat_map(|r| r.cells().collect::<Vec<_>>()).collect();
    let mut obstacles: Vec<(usize, usize, ObstacleKind)> =
        blocked.iter().map(|&(x, y)| (x, y, ObstacleKind::Building)).collect();
    obstacles.sort_unstable_by_key(|&(x, y, _)| (x, y));
    // 40 isolated mines, mutually >= 10 cells apart and clear of buildings
    let mut mines: Vec<Cell> = Vec::with_capacity(40);
    while mines.len() < 40 {
        let cand = random_cell(rng, 15, c - 15);
        if blocked.contains(&cand) || mines.iter().any(|&m| dist(m, cand) < 10.0) {
            continue;
        }
        blocked.insert(cand);
        mines.push(cand);
    }
    // 54 trees anywhere clear of mines, buildings, and the boundary ring
    let mut trees = 0;
    while trees < 54 {
        let cell = random_cell(rng, 6, c - 6);
        if blocked.contains(&cell) {
            continue;
        }
        blocked.insert(cell);
        obstacles.push((cell.0, cell.1, ObstacleKind::Tree));
        trees += 1;
    }
    // 25 drones on the boundary ring, flock tagged by side
    let mut spawns = Vec::with_capacity(25);
    for i in 0..25 {
        let side = i % 4;
        let along = rng.gen_range(2.0..c as f64 - 2.0);
        let (x, y) = match side {
            0 => (along, 1.5),
            1 => (c as f64 - 1.5, along),
            2 => (along, c as f64 - 1.5),
            _ => (1.5, along),
        };
        spawns.push(Spawn { x, y, heading: rng.gen_range(0.0..360.0), flock: side as u32 });
    }
    Scenario {
        name: "urban_mines".into(),
        grid_size: c,
        targets: mines,
        obstacles,
        spawns,
        metadata: metadata(40, 40, 54, 28, 25),
    }
}
