use super::metric::bounded_bfs;
use super::Graph;
use crate::error::{Error, Result};

/// Greedy maximal distance-`r` independent set, scanning ids ascending.
///
/// Members are pairwise more than `r` apart and every vertex lies within `r`
/// of some member.
pub fn maximal_distance_r_independent_set(graph: &Graph, r: u64) -> Result<Vec<usize>> {
    if r == 0 {
        return Err(Error::input("independent set radius must be at least 1"));
    }
    let mut blocked = vec![false; graph.n()];
    let mut set = Vec::new();
    for v in 0..graph.n() {
        if blocked[v] {
            continue;
        }
        set.push(v);
        for (u, d) in bounded_bfs(graph, v, r).into_iter().enumerate() {
            if d.is_some() {
                blocked[u] = true;
            }
        }
    }
    Ok(set)
}

/// Checks both halves of the certificate: pairwise distance `> r` and
/// every vertex within `r` of the set. Returns a description of the first
/// failure.
pub fn is_maximal_distance_r_independent(
    graph: &Graph,
    set: &[usize],
    r: u64,
) -> Result<std::result::Result<(), String>> {
    graph.check_vertices(set)?;
    let mut member = vec![false; graph.n()];
    let mut near = vec![false; graph.n()];
    for &v in set {
        if member[v] {
            return Ok(Err(format!("vertex {v} listed twice")));
        }
        member[v] = true;
    }
    for &v in set {
        for (u, d) in bounded_bfs(graph, v, r).into_iter().enumerate() {
            if d.is_some() {
                if u != v && member[u] {
                    return Ok(Err(format!("members {v} and {u} are within distance {r}")));
                }
                near[u] = true;
            }
        }
    }
    match near.iter().position(|&x| !x) {
        Some(u) => Ok(Err(format!("vertex {u} is farther than {r} from the set"))),
        None => Ok(Ok(())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, FamilySpec};

    #[test]
    fn examples() {
        let p5 = generate(&FamilySpec::Path { n: 5 }).unwrap();
        assert_eq!(maximal_distance_r_independent_set(&p5, 2).unwrap(), vec![0, 3]);
        let c12 = generate(&FamilySpec::Cycle { n: 12 }).unwrap();
        assert_eq!(maximal_distance_r_independent_set(&c12, 2).unwrap(), vec![0, 3, 6, 9]);
        assert_eq!(maximal_distance_r_independent_set(&p5, 10).unwrap(), vec![0]);
        let two = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(maximal_distance_r_independent_set(&two, 5).unwrap(), vec![0, 2]);
        assert!(maximal_distance_r_independent_set(&p5, 0).is_err());
    }

    #[test]
    fn certificate_detects_failures() {
        let p5 = generate(&FamilySpec::Path { n: 5 }).unwrap();
        assert!(is_maximal_distance_r_independent(&p5, &[0, 3], 2).unwrap().is_ok());
        assert!(is_maximal_distance_r_independent(&p5, &[0, 2], 2).unwrap().is_err());
        assert!(is_maximal_distance_r_independent(&p5, &[0], 2).unwrap().is_err());
    }
}
