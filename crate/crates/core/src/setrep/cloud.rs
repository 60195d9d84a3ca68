//! Point clouds and nearest-neighbour queries.

use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use crate::geom::{dist2, Point};
use crate::window::Window;

#[derive(Debug, Error)]
pub enum CloudError {
    #[error("cloud is empty")]
    Empty,
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub tag: String,
    pub window: Window,
}

/// A finite sample of a set, remembering where it came from.
#[derive(Clone, Debug)]
pub struct PointCloud {
    points: Vec<Point>,
    dim: usize,
    pub provenance: Provenance,
}

impl PointCloud {
    pub fn new(points: Vec<Point>, dim: usize, provenance: Provenance) -> Self {
        PointCloud {
            points,
            dim,
            provenance,
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tree(&self) -> KdTree {
        KdTree::build(&self.points, self.dim)
    }

    /// Writes `x1,...,xn` rows with a header line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), CloudError> {
        let header: Vec<String> = (1..=self.dim).map(|i| format!("x{i}")).collect();
        writeln!(out, "{}", header.join(","))?;
        for p in &self.points {
            let row: Vec<String> = p.0.iter().map(|c| format!("{c}")).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Static kd-tree over a copy of the points, stored flat.
#[derive(Clone, Debug)]
pub struct KdTree {
    dim: usize,
    coords: Vec<f64>,
    nodes: Vec<Node>,
    root: Option<usize>,
}

#[derive(Clone, Debug)]
struct Node {
    point: usize,
    axis: usize,
    left: Option<usize>,
    right: Option<usize>,
}

impl KdTree {
    pub fn build(points: &[Point], dim: usize) -> KdTree {
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            coords.extend_from_slice(&p.0);
        }
        let mut tree = KdTree {
            dim,
            coords,
            nodes: Vec::with_capacity(points.len()),
            root: None,
        };
        let mut idx: Vec<usize> = (0..points.len()).collect();
        tree.root = tree.build_rec(&mut idx, 0);
        tree
    }

    fn at(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    fn build_rec(&mut self, idx: &mut [usize], depth: usize) -> Option<usize> {
        if idx.is_empty() {
            return None;
        }
        let axis = depth % self.dim.max(1);
        let mid = idx.len() / 2;
        {
            let coords = &self.coords;
            let dim = self.dim;
            idx.select_nth_unstable_by(mid, |&a, &b| {
                coords[a * dim + axis].total_cmp(&coords[b * dim + axis])
            });
        }
        let point = idx[mid];
        let (lo, rest) = idx.split_at_mut(mid);
        let left = self.build_rec(lo, depth + 1);
        let right = self.build_rec(&mut rest[1..], depth + 1);
        self.nodes.push(Node {
            point,
            axis,
            left,
            right,
        });
        Some(self.nodes.len() - 1)
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    /// Squared distance and index of the nearest point.
    pub fn nearest(&self, q: &[f64]) -> Option<(f64, usize)> {
        let mut best = (f64::INFINITY, usize::MAX);
        self.search(self.root, q, &mut best, 0.0);
        (best.1 != usize::MAX).then_some(best)
    }

    /// Like [`nearest`](Self::nearest) but stops as soon as a point within
    /// `sqrt(stop2)` is found. The result is then only an upper bound.
    pub fn nearest_until(&self, q: &[f64], stop2: f64) -> Option<(f64, usize)> {
        let mut best = (f64::INFINITY, usize::MAX);
        self.search(self.root, q, &mut best, stop2);
        (best.1 != usize::MAX).then_some(best)
    }

    fn search(&self, node: Option<usize>, q: &[f64], best: &mut (f64, usize), stop2: f64) {
        let Some(n) = node else { return };
        if best.0 <= stop2 {
            return;
        }
        let node = &self.nodes[n];
        let p = self.at(node.point);
        let d2 = dist2(p, q);
        if d2 < best.0 || (d2 == best.0 && node.point < best.1) {
            *best = (d2, node.point);
        }
        let diff = q[node.axis] - p[node.axis];
        let (near, far) = if diff <= 0.0 {
            (node.left, node.right)
        } else {
            (node.right, node.left)
        };
        self.search(near, q, best, stop2);
        if diff * diff <= best.0 {
            self.search(far, q, best, stop2);
        }
    }
}

/// Euclidean distance from `q` to the nearest cloud point.
pub fn distance_to_cloud(q: &[f64], tree: &KdTree) -> Option<f64> {
    tree.nearest(q).map(|(d2, _)| d2.sqrt())
}
