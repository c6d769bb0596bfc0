//! Crack-pattern probes for notched-disk runs on a uniform sample grid.

use rockfrac::geometry::{DnbdGeometry, Point};
use rockfrac::solver::{Problem, SimulationState};

/// Sample spacing, mm.
const SPACING: f64 = 0.25;
/// Probe radius around each notch tip and around the disk center, mm.
pub const TIP_RADIUS: f64 = 3.0;
pub const CENTER_RADIUS: f64 = 3.0;
/// A phase field below this value counts as fully cracked.
pub const CRACKED: f64 = 0.05;

/// Phase fields on the grid; NaN outside the physical domain.
#[derive(Debug, Clone)]
pub struct Fields {
    pub s_i: Vec<f64>,
    pub s_ii: Vec<f64>,
}

pub struct Sampler {
    nx: usize,
    ny: usize,
    origin: Point,
    /// Grid index, element and reference coordinates of physical samples.
    samples: Vec<(usize, usize, [f64; 2])>,
    pub tips: [Point; 2],
}

impl Sampler {
    pub fn new(problem: &Problem, geometry: &DnbdGeometry) -> Self {
        let m = &problem.disc.mesh;
        let b = m.bounds();
        let nx = ((b.max.x - b.min.x) / SPACING) as usize + 1;
        let ny = ((b.max.y - b.min.y) / SPACING) as usize + 1;
        let mut samples = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                let x = b.min + Point::new(i as f64, j as f64) * SPACING;
                if !problem.shape.contains(x) {
                    continue;
                }
                if let Some((e, xi)) = m.locate(x) {
                    samples.push((j * nx + i, e, xi));
                }
            }
        }
        let [top, bottom] = geometry.notches();
        let tip = |n: Option<rockfrac::geometry::Notch>| n.expect("notched disk").tip;
        Self {
            nx,
            ny,
            origin: b.min,
            samples,
            tips: [tip(top), tip(bottom)],
        }
    }

    pub fn point(&self, k: usize) -> Point {
        self.origin + Point::new((k % self.nx) as f64, (k / self.nx) as f64) * SPACING
    }

    pub fn fields(&self, problem: &Problem, state: &SimulationState) -> Fields {
        let n = self.nx * self.ny;
        let (mut s_i, mut s_ii) = (vec![f64::NAN; n], vec![f64::NAN; n]);
        for &(k, e, xi) in &self.samples {
            s_i[k] = problem.disc.scalar_at_reference(&state.s_i, e, xi).0;
            s_ii[k] = problem.disc.scalar_at_reference(&state.s_ii, e, xi).0;
        }
        Fields { s_i, s_ii }
    }

    fn within(&self, k: usize, center: Point, r: f64) -> bool {
        (self.point(k) - center).norm() <= r
    }

    /// 8-connected components of the samples where `field < threshold`.
    pub fn components(&self, field: &[f64], threshold: f64) -> Vec<Vec<usize>> {
        let below: Vec<bool> = field.iter().map(|v| *v < threshold).collect();
        let mut seen = vec![false; field.len()];
        let mut out = Vec::new();
        for start in 0..field.len() {
            if !below[start] || seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(k) = stack.pop() {
                comp.push(k);
                let (i, j) = ((k % self.nx) as isize, (k / self.nx) as isize);
                for dj in -1..=1 {
                    for di in -1..=1 {
                        let (a, b) = (i + di, j + dj);
                        if a < 0 || b < 0 || a >= self.nx as isize || b >= self.ny as isize {
                            continue;
                        }
                        let q = b as usize * self.nx + a as usize;
                        if below[q] && !seen[q] {
                            seen[q] = true;
                            stack.push(q);
                        }
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Whether each tip has a fully cracked sample of `field` nearby.
    pub fn cracked_at_tips(&self, field: &[f64]) -> [bool; 2] {
        self.tips.map(|tip| {
            self.samples
                .iter()
                .any(|&(k, _, _)| field[k] < CRACKED && self.within(k, tip, TIP_RADIUS))
        })
    }

    pub fn cracked_at_center(&self, field: &[f64]) -> bool {
        self.samples
            .iter()
            .any(|&(k, _, _)| field[k] < CRACKED && self.within(k, Point::zeros(), CENTER_RADIUS))
    }

    /// A single shear-cracked region touching both tips and the center.
    pub fn central_band(&self, fields: &Fields) -> bool {
        self.components(&fields.s_ii, CRACKED).iter().any(|c| {
            let touches = |p: Point, r: f64| c.iter().any(|&k| self.within(k, p, r));
            touches(self.tips[0], TIP_RADIUS)
                && touches(self.tips[1], TIP_RADIUS)
                && touches(Point::zeros(), CENTER_RADIUS)
        })
    }

    /// Largest bounding-box diagonal over the regions with `s_I < threshold`,
    /// mm. Overestimates the length of curved regions.
    pub fn longest_tensile_region(&self, fields: &Fields, threshold: f64) -> f64 {
        self.components(&fields.s_i, threshold)
            .iter()
            .map(|c| {
                let (mut lo, mut hi) = (self.point(c[0]), self.point(c[0]));
                for &k in c {
                    let p = self.point(k);
                    lo = lo.inf(&p);
                    hi = hi.sup(&p);
                }
                (hi - lo).norm() + SPACING
            })
            .fold(0.0, f64::max)
    }
}
