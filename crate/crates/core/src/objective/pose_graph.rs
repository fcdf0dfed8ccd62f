use crate::error::{Error, Result};
use crate::graph::{EdgeId, ExchangeGraph};
use crate::scalar::Real;

/// A planar pose, or a relative-pose measurement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pose<T = f64> {
    pub x: T,
    pub y: T,
    pub theta: T,
}

impl<T: Real> Pose<T> {
    pub fn new(x: T, y: T, theta: T) -> Self {
        Pose { x, y, theta }
    }

    /// Pose of `other` expressed in the frame of `self`.
    pub fn between(&self, other: &Pose<T>) -> Pose<T> {
        let (dx, dy) = (other.x - self.x, other.y - self.y);
        let (s, c) = self.theta.sin_cos();
        Pose {
            x: c * dx + s * dy,
            y: -s * dx + c * dy,
            theta: other.theta - self.theta,
        }
    }
}

/// Upper triangle `[I11, I12, I13, I22, I23, I33]` of a 3×3 information matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Information<T = f64>(pub [T; 6]);

impl<T: Real> Information<T> {
    pub fn diagonal(xx: T, yy: T, tt: T) -> Self {
        let z = T::zero();
        Information([xx, z, z, yy, z, tt])
    }

    pub fn identity() -> Self {
        Self::diagonal(T::one(), T::one(), T::one())
    }

    pub fn matrix(&self) -> [[T; 3]; 3] {
        let [a, b, c, d, e, f] = self.0;
        [[a, b, c], [b, d, e], [c, e, f]]
    }

    /// Lower Cholesky factor, if positive definite.
    pub fn factor(&self) -> Option<[[T; 3]; 3]> {
        let m = self.matrix();
        let mut l = [[T::zero(); 3]; 3];
        for j in 0..3 {
            let mut d = m[j][j];
            for k in 0..j {
                d = d - l[j][k] * l[j][k];
            }
            if !(d > T::zero()) {
                return None;
            }
            l[j][j] = d.sqrt();
            for i in (j + 1)..3 {
                let mut s = m[i][j];
                for k in 0..j {
                    s = s - l[i][k] * l[j][k];
                }
                l[i][j] = s / l[j][j];
            }
        }
        Some(l)
    }
}

/// Odometry or prior inter-robot constraint already in the pose graph.
#[derive(Clone, Debug, PartialEq)]
pub struct PoseEdge<T = f64> {
    pub from: usize,
    pub to: usize,
    pub measurement: Pose<T>,
    pub information: Information<T>,
    /// Tree-connectivity weight.
    pub weight: T,
}

/// The pose pair a potential loop closure would connect if verified.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate<T = f64> {
    pub edge: EdgeId,
    pub from: usize,
    pub to: usize,
    /// Tree-connectivity weight, scaled by the edge probability.
    pub weight: T,
    /// D-criterion information, scaled by the edge probability.
    pub information: Information<T>,
}

/// Pose graph prior to the rendezvous, plus the candidate map binding every
/// exchange-graph edge to a pose pair.
#[derive(Clone, Debug, PartialEq)]
pub struct PoseGraph<T = f64> {
    pub poses: Vec<Pose<T>>,
    /// Pose whose coordinates are held fixed (removed from the reduced space).
    pub anchor: usize,
    pub base_edges: Vec<PoseEdge<T>>,
    /// Indexed by exchange-graph edge id.
    pub candidates: Vec<Candidate<T>>,
}

impl<T: Real> PoseGraph<T> {
    pub fn num_poses(&self) -> usize {
        self.poses.len()
    }

    /// Position of `pose` in the anchored coordinate ordering.
    pub fn reduced_index(&self, pose: usize) -> Option<usize> {
        match pose.cmp(&self.anchor) {
            std::cmp::Ordering::Less => Some(pose),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(pose - 1),
        }
    }

    pub fn is_connected(&self) -> bool {
        let n = self.poses.len();
        if n == 0 {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut components = n;
        for e in &self.base_edges {
            if e.from >= n || e.to >= n {
                continue;
            }
            let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        components == 1
    }

    /// Structural checks independent of any exchange graph.
    pub fn validate(&self) -> Result<()> {
        let n = self.poses.len();
        let bad = |m: String| Err(Error::InvalidPoseGraph(m));
        if n < 2 {
            return bad(format!("need at least 2 poses, got {n}"));
        }
        if self.anchor >= n {
            return bad(format!("anchor {} out of range", self.anchor));
        }
        for e in &self.base_edges {
            if e.from >= n || e.to >= n || e.from == e.to {
                return bad(format!("base edge {}-{} has invalid endpoints", e.from, e.to));
            }
            if !(e.weight > T::zero()) {
                return bad(format!("base edge {}-{} has non-positive weight", e.from, e.to));
            }
        }
        for (i, c) in self.candidates.iter().enumerate() {
            if c.edge.index() != i {
                return bad(format!("candidate at position {i} maps edge {}", c.edge));
            }
            if c.from >= n || c.to >= n || c.from == c.to {
                return bad(format!("candidate {} has invalid endpoints", c.edge));
            }
            if !(c.weight > T::zero()) {
                return bad(format!("candidate {} has non-positive weight", c.edge));
            }
        }
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(())
    }

    /// Keeps the candidates of `kept` (old edge ids, in new id order) and
    /// renumbers them densely, as after [`ExchangeGraph::cap_degree`].
    pub fn restrict(&self, kept: &[EdgeId]) -> Result<Self> {
        let candidates = kept
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let mut c = self.candidates.get(e.index()).ok_or(Error::UnknownEdge(*e))?.clone();
                c.edge = EdgeId(i);
                Ok(c)
            })
            .collect::<Result<_>>()?;
        Ok(PoseGraph {
            candidates,
            ..self.clone()
        })
    }

    /// Checks that every exchange edge maps to exactly one pose pair.
    pub fn validate_for(&self, graph: &ExchangeGraph<T>) -> Result<()> {
        self.validate()?;
        if self.candidates.len() != graph.num_edges() {
            return Err(Error::InvalidPoseGraph(format!(
                "{} candidates for {} exchange edges",
                self.candidates.len(),
                graph.num_edges()
            )));
        }
        Ok(())
    }
}
