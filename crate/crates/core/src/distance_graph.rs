//! Distance graphs on a maximal distance-`r` independent set, the nearest
//! member map `phi`, and exhaustive checks of their distortion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    bfs, bounded_bfs, is_maximal_distance_r_independent, maximal_distance_r_independent_set, multi_source_nearest,
    Graph, WeightedGraph,
};
use crate::rational::{self, Rational};

/// For every vertex of the host, a member of `I` within distance `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhiMap {
    pub image: Vec<usize>,
}

impl PhiMap {
    pub fn get(&self, u: usize) -> usize {
        self.image[u]
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }
}

/// `H(G, I, r, sigma)`: vertices are the members of `I`, renumbered
/// `0..|I|` in ascending order, and two members are adjacent when they are
/// within `sigma * r` in the host. In the weighted variant every edge
/// weighs `sigma * r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DistanceGraphJson", into = "DistanceGraphJson")]
pub struct DistanceGraph {
    pub r: u64,
    pub sigma: u64,
    pub weighted: bool,
    /// Host ids of the members of `I`, ascending. Position = id in `h`.
    pub independent: Vec<usize>,
    pub h: Graph,
    pub phi: PhiMap,
    index: Vec<Option<usize>>,
}

impl DistanceGraph {
    pub fn host_n(&self) -> usize {
        self.phi.len()
    }

    /// Id in `h` of a host vertex that belongs to `I`.
    pub fn h_index(&self, v: usize) -> Option<usize> {
        self.index.get(v).copied().flatten()
    }

    /// Id in `h` of `phi(u)`.
    pub fn phi_h(&self, u: usize) -> usize {
        self.index[self.phi.get(u)].expect("phi maps into I")
    }

    /// Host id of an `h` vertex.
    pub fn host_of(&self, x: usize) -> usize {
        self.independent[x]
    }

    pub fn edge_weight(&self) -> Rational {
        if self.weighted {
            rational::int((self.sigma * self.r) as i64)
        } else {
            rational::int(1)
        }
    }

    /// `h` with its edge weights attached.
    pub fn weighted_h(&self) -> WeightedGraph {
        let w = self.edge_weight();
        WeightedGraph::from_edges(self.h.n(), self.h.edges().map(|(u, v)| (u, v, w))).expect("h is simple")
    }

    /// Rebuilds the graph from `host` and compares, so a file read from
    /// disk can be trusted.
    pub fn validate(&self, host: &Graph) -> Result<()> {
        let fresh = build_distance_graph(host, self.r, self.sigma, self.weighted, Some(&self.independent))?;
        if fresh.h != self.h {
            return Err(Error::input("distance graph edges do not match the host"));
        }
        for u in 0..host.n() {
            let p = self.phi.get(u);
            let d = bfs(host, u)?.get(p);
            if self.h_index(p).is_none() || d.is_none_or(|d| d > self.r) {
                return Err(Error::input(format!("phi({u}) = {p} is not a member of I within r")));
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum HJson {
    Weighted(WeightedGraph),
    Plain(Graph),
}

#[derive(Serialize, Deserialize)]
struct DistanceGraphJson {
    r: u64,
    sigma: u64,
    weighted: bool,
    #[serde(rename = "I")]
    independent: Vec<usize>,
    #[serde(rename = "H")]
    h: HJson,
    phi: PhiMap,
}

impl From<DistanceGraph> for DistanceGraphJson {
    fn from(dg: DistanceGraph) -> Self {
        let h = if dg.weighted {
            HJson::Weighted(dg.weighted_h())
        } else {
            HJson::Plain(dg.h.clone())
        };
        DistanceGraphJson {
            r: dg.r,
            sigma: dg.sigma,
            weighted: dg.weighted,
            independent: dg.independent,
            h,
            phi: dg.phi,
        }
    }
}

impl TryFrom<DistanceGraphJson> for DistanceGraph {
    type Error = Error;

    fn try_from(j: DistanceGraphJson) -> Result<Self> {
        let expected = rational::int((j.sigma * j.r) as i64);
        let h = match (j.h, j.weighted) {
            (HJson::Weighted(w), true) => {
                if w.edges().any(|(_, _, x)| x != expected) {
                    return Err(Error::input("distance graph edge weight differs from sigma * r"));
                }
                w.skeleton()
            }
            (HJson::Plain(g), false) => g,
            (HJson::Plain(g), true) if g.num_edges() == 0 => g,
            _ => return Err(Error::input("distance graph `weighted` flag does not match `H`")),
        };
        if !j.independent.windows(2).all(|w| w[0] < w[1]) || h.n() != j.independent.len() {
            return Err(Error::input("`I` must be ascending with one entry per vertex of `H`"));
        }
        let n = j.phi.len();
        let mut index = vec![None; n];
        for (x, &v) in j.independent.iter().enumerate() {
            if v >= n {
                return Err(Error::InvalidVertex { vertex: v, n });
            }
            index[v] = Some(x);
        }
        if j.phi.image.iter().any(|&p| p >= n || index[p].is_none()) {
            return Err(Error::input("phi must map into I"));
        }
        Ok(DistanceGraph {
            r: j.r,
            sigma: j.sigma,
            weighted: j.weighted,
            independent: j.independent,
            h,
            phi: j.phi,
            index,
        })
    }
}

/// Builds `H(G, I, r, sigma)` and `phi`.
///
/// Without `I` the greedy ascending-id independent set is used. A supplied
/// `I` must be a maximal distance-`r` independent set. `phi(u)` is the
/// nearest member of `I`, ties going to the lowest id.
pub fn build_distance_graph(
    graph: &Graph,
    r: u64,
    sigma: u64,
    weighted: bool,
    independent: Option<&[usize]>,
) -> Result<DistanceGraph> {
    if r == 0 {
        return Err(Error::input("distance graph radius r must be at least 1"));
    }
    if sigma < 3 {
        return Err(Error::input("distance graph sigma must be at least 3"));
    }
    let set = match independent {
        Some(given) => {
            let mut set = given.to_vec();
            set.sort_unstable();
            if let Err(why) = is_maximal_distance_r_independent(graph, &set, r)? {
                return Err(Error::input(format!(
                    "I is not a maximal distance-{r} independent set: {why}"
                )));
            }
            set
        }
        None => maximal_distance_r_independent_set(graph, r)?,
    };
    let n = graph.n();
    let mut index = vec![None; n];
    for (x, &v) in set.iter().enumerate() {
        index[v] = Some(x);
    }
    let reach = sigma * r;
    let mut edges = Vec::new();
    for (x, &v) in set.iter().enumerate() {
        for (w, d) in bounded_bfs(graph, v, reach).into_iter().enumerate() {
            if let (Some(_), Some(y)) = (d, index[w]) {
                if y > x {
                    edges.push((x, y));
                }
            }
        }
    }
    let h = Graph::from_edges(set.len(), edges)?;
    let image = multi_source_nearest(graph, &set)?
        .into_iter()
        .map(|l| l.expect("maximal independent set reaches every vertex").0)
        .collect();
    Ok(DistanceGraph {
        r,
        sigma,
        weighted,
        independent: set,
        h,
        phi: PhiMap { image },
        index,
    })
}

/// A pair of host vertices with both distances and the slack of the
/// tighter inequality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairWitness {
    pub u: usize,
    pub v: usize,
    pub dist_g: u64,
    #[serde(with = "rational")]
    pub dist_h: Rational,
    #[serde(with = "rational")]
    pub slack: Rational,
}

/// Result of checking every pair of host vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasiIsometryCert {
    pub weighted: bool,
    /// Multiplicative and additive parameters `phi` is certified to achieve.
    #[serde(with = "rational")]
    pub alpha: Rational,
    #[serde(with = "rational")]
    pub beta: Rational,
    pub pairs_checked: u64,
    /// Pair closest to violating the lower inequality.
    pub worst_lower: Option<PairWitness>,
    /// Pair closest to violating the upper inequality.
    pub worst_upper: Option<PairWitness>,
    /// Largest distance in `H` from a vertex to the image of `phi`.
    #[serde(with = "rational")]
    pub density: Rational,
}

/// The two distortion inequalities for one pair, as (lower, upper) bounds
/// on the distance in `H`.
fn bounds(dg: &DistanceGraph, dist_g: u64) -> (Rational, Rational) {
    let d = rational::int(dist_g as i64);
    let r = rational::int(dg.r as i64);
    let s = rational::int(dg.sigma as i64);
    if dg.weighted {
        (d - r * 2, s * d + s * r)
    } else {
        (d / (s * r) - r * 2, d / ((s - 2) * r) + 1)
    }
}

/// Checks, for every pair `u, v` of host vertices,
/// `d_G - 2r <= d_H(phi u, phi v) <= sigma d_G + sigma r` (weighted) or
/// `d_G / (sigma r) - 2r <= d_H <= d_G / ((sigma - 2) r) + 1` (unweighted).
///
/// A violation is a bug in the construction, reported as
/// [`Error::InvariantViolation`] naming the pair.
pub fn check_quasi_isometry(graph: &Graph, dg: &DistanceGraph) -> Result<QuasiIsometryCert> {
    let n = graph.n();
    if dg.host_n() != n {
        return Err(Error::input("distance graph was built for a different host"));
    }
    let unit = dg.edge_weight();
    let h_dist: Vec<Vec<Option<u64>>> = (0..dg.h.n())
        .map(|x| bfs(&dg.h, x).map(|m| m.dist))
        .collect::<Result<_>>()?;
    let mut cert = QuasiIsometryCert {
        weighted: dg.weighted,
        alpha: rational::int(0),
        beta: rational::int(0),
        pairs_checked: 0,
        worst_lower: None,
        worst_upper: None,
        density: rational::int(0),
    };
    for u in 0..n {
        let from_u = bfs(graph, u)?;
        let hu = dg.phi_h(u);
        for v in u..n {
            let hv = dg.phi_h(v);
            let (dist_g, hops) = match (from_u.get(v), h_dist[hu][hv]) {
                (None, None) => continue,
                (Some(dg_), Some(dh)) => (dg_, dh),
                _ => {
                    return Err(Error::violation(
                        "phi joins or splits components",
                        format!("pair ({u}, {v})"),
                    ))
                }
            };
            cert.pairs_checked += 1;
            let dist_h = unit * rational::int(hops as i64);
            let (lo, hi) = bounds(dg, dist_g);
            let witness = |slack| PairWitness {
                u,
                v,
                dist_g,
                dist_h,
                slack,
            };
            if dist_h < lo || dist_h > hi {
                return Err(Error::violation(
                    "distance graph distortion bound",
                    format!(
                        "pair ({u}, {v}): dist_G = {dist_g}, dist_H = {}, allowed [{}, {}]",
                        rational::format(&dist_h),
                        rational::format(&lo),
                        rational::format(&hi)
                    ),
                ));
            }
            if cert.worst_lower.as_ref().is_none_or(|w| dist_h - lo < w.slack) {
                cert.worst_lower = Some(witness(dist_h - lo));
            }
            if cert.worst_upper.as_ref().is_none_or(|w| hi - dist_h < w.slack) {
                cert.worst_upper = Some(witness(hi - dist_h));
            }
        }
    }
    let mut image: Vec<usize> = (0..n).map(|u| dg.phi_h(u)).collect();
    image.sort_unstable();
    image.dedup();
    let near = multi_source_nearest(&dg.h, &image)?;
    let far = near.iter().map(|l| l.map_or(u64::MAX, |(_, d)| d)).max().unwrap_or(0);
    cert.density = unit * rational::int(far as i64);
    let (r, s) = (rational::int(dg.r as i64), rational::int(dg.sigma as i64));
    (cert.alpha, cert.beta) = if dg.weighted { (s, s * r) } else { (s * r, r * 2) };
    Ok(cert)
}

/// Maximum degree of `H` against `2^(rho m)` with `rho = floor(log2 sigma) + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub max_degree: usize,
    pub rho: u32,
    pub m_estimate: u32,
    /// The bound is `2^bound_exponent`.
    pub bound_exponent: u64,
    pub holds: bool,
    /// Least dimension compatible with the host's own maximum degree
    /// (`Ball(u, 1)` needs `deg(u) + 1` balls of radius 1/2). An estimate
    /// below it undershoots the true doubling dimension.
    pub m_lower: u32,
    pub estimate_undershoots: bool,
}

impl DegreeReport {
    pub fn into_result(self) -> Result<Self> {
        if self.holds {
            Ok(self)
        } else {
            Err(Error::violation(
                "distance graph degree bound",
                format!(
                    "max degree {} is not below 2^{}{}",
                    self.max_degree,
                    self.bound_exponent,
                    if self.estimate_undershoots {
                        " (the dimension estimate undershoots)"
                    } else {
                        ""
                    }
                ),
            ))
        }
    }
}

pub fn rho(sigma: u64) -> u32 {
    64 - sigma.leading_zeros()
}

pub fn check_degree_bound(graph: &Graph, dg: &DistanceGraph, m_estimate: u32) -> DegreeReport {
    let max_degree = dg.h.max_degree();
    let rho = rho(dg.sigma);
    let bound_exponent = rho as u64 * m_estimate as u64;
    let holds = (max_degree as u128) < 1u128.checked_shl(bound_exponent.min(127) as u32).unwrap_or(u128::MAX);
    let m_lower = crate::graph::ceil_log2(graph.max_degree() as u64 + 1);
    DegreeReport {
        max_degree,
        rho,
        m_estimate,
        bound_exponent,
        holds,
        m_lower,
        estimate_undershoots: m_estimate < m_lower,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, FamilySpec};

    fn c12() -> Graph {
        generate(&FamilySpec::Cycle { n: 12 }).unwrap()
    }

    #[test]
    fn cycle_example_weighted() {
        let dg = build_distance_graph(&c12(), 2, 3, true, Some(&[0, 3, 6, 9])).unwrap();
        assert_eq!(dg.h, generate(&FamilySpec::Complete { n: 4 }).unwrap());
        assert!(dg.weighted_h().edges().all(|(_, _, w)| w == rational::int(6)));
        assert_eq!(dg.phi.get(1), 0);
        assert_eq!(dg.phi.get(7), 6);
        let cert = check_quasi_isometry(&c12(), &dg).unwrap();
        assert_eq!(cert.pairs_checked, 78);
        assert_eq!((cert.alpha, cert.beta), (rational::int(3), rational::int(6)));
        assert_eq!(cert.density, rational::int(0));
    }

    #[test]
    fn cycle_example_unweighted() {
        let dg = build_distance_graph(&c12(), 2, 4, false, None).unwrap();
        assert_eq!(dg.independent, vec![0, 3, 6, 9]);
        assert_eq!(dg.h.num_edges(), 6);
        check_quasi_isometry(&c12(), &dg).unwrap();
    }

    #[test]
    fn single_vertex() {
        let g = Graph::empty(1);
        let dg = build_distance_graph(&g, 1, 3, true, None).unwrap();
        assert_eq!(dg.h.n(), 1);
        assert_eq!(dg.phi.image, vec![0]);
        let cert = check_quasi_isometry(&g, &dg).unwrap();
        assert_eq!(cert.pairs_checked, 1);
    }

    #[test]
    fn rejects_bad_independent_sets() {
        assert!(build_distance_graph(&c12(), 2, 3, true, Some(&[0, 2, 6, 9])).is_err());
        assert!(build_distance_graph(&c12(), 2, 3, true, Some(&[0, 6])).is_err());
        assert!(build_distance_graph(&c12(), 2, 2, true, None).is_err());
    }

    #[test]
    fn degree_bound_example() {
        assert_eq!((rho(3), rho(4)), (2, 3));
        let dg = build_distance_graph(&c12(), 2, 3, true, Some(&[0, 3, 6, 9])).unwrap();
        let rep = check_degree_bound(&c12(), &dg, 1);
        assert_eq!((rep.max_degree, rep.bound_exponent, rep.holds), (3, 2, true));
        assert!(rep.estimate_undershoots);
        assert!(!check_degree_bound(&c12(), &dg, 2).estimate_undershoots);
    }

    #[test]
    fn json_round_trip() {
        for weighted in [true, false] {
            let dg = build_distance_graph(&c12(), 2, 3, weighted, None).unwrap();
            let s = serde_json::to_string(&dg).unwrap();
            let back: DistanceGraph = serde_json::from_str(&s).unwrap();
            assert_eq!(back, dg);
            back.validate(&c12()).unwrap();
        }
    }
}
