use super::Thresholds;
use crate::geom::Vec2;
use crate::grid::{CellGrid, CellIndex, CellState, Dynamics, GridGeometry, Occupancy, Reliability};
use crate::scalar::Scalar;

/// Velocity-coherent group of occupied cells and its aggregate state.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster<T: Scalar = f64> {
    pub id: usize,
    /// Row-major order.
    pub members: Vec<CellIndex>,
    /// `m_occ`-weighted gravity center (m).
    pub center: Vec2<T>,
    /// `m_occ`-weighted mean cell velocity.
    pub velocity: Vec2<T>,
    /// Norm of `velocity`.
    pub speed: T,
    /// Heading of `velocity` (rad).
    pub theta: T,
    /// Highest `h_max` minus lowest `h_min` over the members; 0 without heights.
    pub height: T,
    /// `m_occ`-weighted mean particle age.
    pub age: T,
    pub n_obs: usize,
    pub n_c: usize,
    pub reliability: Option<Reliability>,
    pub dynamics: Option<Dynamics>,
    /// The ego sat on the gravity center, so the dynamics label is a fallback.
    pub bearing_undefined: bool,
}

/// Occupied cells grouped into clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering<T: Scalar = f64> {
    pub clusters: Vec<Cluster<T>>,
    /// Occupied cells dropped with their undersized cluster.
    pub noise: Vec<CellIndex>,
    /// Cluster index per cell.
    pub cluster_of: CellGrid<Option<usize>>,
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        match self.rank[a].cmp(&self.rank[b]) {
            std::cmp::Ordering::Less => self.parent[a] = b,
            std::cmp::Ordering::Greater => self.parent[b] = a,
            std::cmp::Ordering::Equal => {
                self.parent[b] = a;
                self.rank[a] += 1;
            }
        }
    }
}

/// Partitions the cells flagged in `occupied` (row-major, `width × height`).
/// Two cells join when they are 8-adjacent and their velocities differ by
/// less than `max_dv` in Euclidean norm. Components are ordered by their
/// first cell in row-major order; members are row-major too.
pub fn partition_occupied<T: Scalar>(
    width: usize,
    height: usize,
    occupied: &[bool],
    velocity: &[Vec2<T>],
    max_dv: T,
) -> Vec<Vec<CellIndex>> {
    let n = width * height;
    let mut uf = UnionFind::new(n);
    // forward half of the 8-neighborhood
    const FORWARD: [(i64, i64); 4] = [(1, 0), (-1, 1), (0, 1), (1, 1)];
    for row in 0..height {
        for col in 0..width {
            let i = row * width + col;
            if !occupied[i] {
                continue;
            }
            for (dc, dr) in FORWARD {
                let (c, r) = (col as i64 + dc, row as i64 + dr);
                if c < 0 || r < 0 || c >= width as i64 || r >= height as i64 {
                    continue;
                }
                let j = r as usize * width + c as usize;
                if occupied[j] && (velocity[i] - velocity[j]).norm() < max_dv {
                    uf.union(i, j);
                }
            }
        }
    }
    let mut slot = vec![usize::MAX; n];
    let mut out: Vec<Vec<CellIndex>> = Vec::new();
    for i in (0..n).filter(|&i| occupied[i]) {
        let root = uf.find(i);
        if slot[root] == usize::MAX {
            slot[root] = out.len();
            out.push(Vec::new());
        }
        out[slot[root]].push(CellIndex::new(i % width, i / width));
    }
    out
}

fn cluster_state<T: Scalar>(
    id: usize,
    members: Vec<CellIndex>,
    geom: &GridGeometry<T>,
    cells: &CellGrid<CellState<T>>,
) -> Cluster<T> {
    let mut mass = T::zero();
    let mut center = Vec2::zero();
    let mut velocity = Vec2::zero();
    let mut age = T::zero();
    let mut n_obs = 0;
    let mut h_lo = T::infinity();
    let mut h_hi = T::neg_infinity();
    for &c in &members {
        let s = cells.get(c);
        let w = s.masses.occ;
        mass += w;
        center += geom.cell_center(c).scale(w);
        velocity += s.velocity.scale(w);
        age += s.particle_age_mean * w;
        n_obs += usize::from(s.observed_this_frame);
        if let Some(h) = s.heights {
            h_lo = h_lo.min(h.min);
            h_hi = h_hi.max(h.max);
        }
    }
    let n_c = members.len();
    let (center, velocity, age) = if mass > T::zero() {
        (center.scale(T::one() / mass), velocity.scale(T::one() / mass), age / mass)
    } else {
        let k = T::one() / T::from_count(n_c);
        let c = members
            .iter()
            .fold(Vec2::zero(), |a, &m| a + geom.cell_center(m));
        (c.scale(k), Vec2::zero(), T::zero())
    };
    Cluster {
        id,
        members,
        center,
        velocity,
        speed: velocity.norm(),
        theta: velocity.angle(),
        height: if h_hi >= h_lo { h_hi - h_lo } else { T::zero() },
        age,
        n_obs,
        n_c,
        reliability: None,
        dynamics: None,
        bearing_undefined: false,
    }
}

/// Groups occupied cells into velocity-coherent clusters and computes their
/// state. Clusters smaller than `T_ncl` are dropped; their cells are listed
/// in [`Clustering::noise`] so the caller can demote them to unknown.
pub fn cluster_occupied<T: Scalar>(
    geom: &GridGeometry<T>,
    cells: &CellGrid<CellState<T>>,
    occ: &CellGrid<Occupancy>,
    th: &Thresholds<T>,
) -> Clustering<T> {
    let occupied: Vec<bool> = occ.as_slice().iter().map(|&o| o == Occupancy::Occupied).collect();
    let velocity: Vec<Vec2<T>> = cells.as_slice().iter().map(|c| c.velocity).collect();
    let parts = partition_occupied(geom.width(), geom.height(), &occupied, &velocity, th.t_v_cl);

    let mut clusters = Vec::new();
    let mut noise = Vec::new();
    let mut cluster_of = CellGrid::filled(geom.width(), geom.height(), None);
    for members in parts {
        if members.len() < th.t_ncl {
            noise.extend(members);
            continue;
        }
        let id = clusters.len();
        for &m in &members {
            *cluster_of.get_mut(m) = Some(id);
        }
        clusters.push(cluster_state(id, members, geom, cells));
    }
    noise.sort_by_key(|c| (c.row, c.col));
    Clustering {
        clusters,
        noise,
        cluster_of,
    }
}

/// Static below `T_v_static`; otherwise oncoming when the heading points
/// within `T_theta_onc` of the direction from the cluster to the ego, else
/// receding. The second value is `true` when that direction is undefined
/// (ego on the gravity center), in which case the cluster counts as oncoming.
pub fn label_dynamics<T: Scalar>(
    cluster: &Cluster<T>,
    ego: Vec2<T>,
    th: &Thresholds<T>,
) -> (Dynamics, bool) {
    if cluster.speed < th.t_v_static {
        return (Dynamics::Static, false);
    }
    let to_ego = ego - cluster.center;
    if to_ego.norm() <= T::epsilon() {
        return (Dynamics::Oncoming, true);
    }
    let bearing = crate::geom::angle_diff_abs(cluster.theta, to_ego.angle()).to_degrees();
    if bearing <= th.t_theta_onc {
        (Dynamics::Oncoming, false)
    } else {
        (Dynamics::Receding, false)
    }
}

/// Unreliable if the cluster is too flat, too little of it was observed
/// this frame, or its particles are too young.
pub fn label_reliability<T: Scalar>(cluster: &Cluster<T>, th: &Thresholds<T>) -> Reliability {
    let observed = T::from_count(cluster.n_obs) / T::from_count(cluster.n_c);
    if cluster.height < th.t_height_reli || observed < th.t_obs_reli || cluster.age < th.t_age_reli
    {
        Reliability::Unreliable
    } else {
        Reliability::Reliable
    }
}
