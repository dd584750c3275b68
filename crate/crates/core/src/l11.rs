//! L(1,1)-labeling through twin-edge deletion, and the derived
//! `p`-approximation for L(p,1).

use crate::dp::lambda_dp;
use crate::error::{Error, Result};
use crate::exact::{lambda_exact, EXACT_CAP};
use crate::graph::Graph;
use crate::labeling::{scale_labeling, verify, Label, Labeling, PqParams};
use crate::twincover::{is_twin_cover, min_twin_cover, twin_edges};

/// Removes every edge with both endpoints outside `x`. Each such edge joins
/// true twins when `x` is a twin cover, so `x` covers every remaining edge.
pub fn delete_twin_edges(g: &Graph, x: &[usize]) -> Result<Graph> {
    if !is_twin_cover(g, x) {
        let twins = twin_edges(g);
        let (u, v) = g
            .edges()
            .iter()
            .copied()
            .find(|&(u, v)| !x.contains(&u) && !x.contains(&v) && !twins.contains(&(u, v)))
            .expect("a cover that is not a twin cover leaves a non-twin edge");
        return Err(Error::NotTwinCover(u, v));
    }
    let mut inside = vec![false; g.n()];
    for &v in x {
        inside[v] = true;
    }
    Ok(g.without_edges(|u, v| !inside[u] && !inside[v]))
}

/// The cover used for the reduction. A complete graph has the empty minimum
/// twin cover, and deleting all of its edges would change every
/// distance-two neighborhood, so one vertex is kept instead.
pub fn reduction_cover(g: &Graph) -> Result<Vec<usize>> {
    let x = min_twin_cover(g)?;
    Ok(if x.is_empty() && g.n() >= 2 { vec![0] } else { x })
}

/// `λ_{1,1}` with an optimal labeling, computed on the twin-edge-deleted
/// graph and re-verified on `g`.
pub fn lambda_l11(g: &Graph) -> Result<(Label, Labeling)> {
    g.require_connected()?;
    let params = PqParams::new(1, 1)?;
    let reduced = delete_twin_edges(g, &reduction_cover(g)?)?;
    let (k, f) = if reduced.n() <= EXACT_CAP {
        lambda_exact(&reduced, params)?
    } else {
        lambda_dp(&reduced, params)?
    };
    if !verify(g, &f, params)?.is_valid() {
        return Err(Error::Internal("labeling of the reduced graph is invalid on the original".into()));
    }
    Ok((k, f))
}

/// An L(p,1)-labeling of span at most `p·λ_{p,1}(g)`: an optimal L(1,1)
/// labeling with every label multiplied by `p`.
pub fn approx_lp1(g: &Graph, p: u32) -> Result<(Label, Labeling)> {
    PqParams::new(p, 1)?;
    let (k, f) = lambda_l11(g)?;
    Ok((k * p, scale_labeling(&f, p)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{named, random_suite};

    fn closed_ball2(g: &Graph, v: usize) -> Vec<usize> {
        let d = g.distances_from(v);
        (0..g.n()).filter(|&u| d[u].is_some_and(|d| d <= 2)).collect()
    }

    #[test]
    fn deletion_examples() {
        let k3 = named::complete(3);
        assert_eq!(delete_twin_edges(&k3, &[]).unwrap().m(), 0);
        let p3 = named::path(3);
        assert_eq!(delete_twin_edges(&p3, &[1]).unwrap(), p3);
        let bowtie = named::bowtie();
        let star = delete_twin_edges(&bowtie, &[0]).unwrap();
        assert_eq!(star.m(), 4);
        assert!(star.edges().iter().all(|&(u, v)| u == 0 || v == 0));
        assert_eq!(delete_twin_edges(&p3, &[]), Err(Error::NotTwinCover(0, 1)));
    }

    #[test]
    fn lambda_examples() {
        for n in 1..=6 {
            let (k, f) = lambda_l11(&named::complete(n)).unwrap();
            assert_eq!(k as usize, n - 1);
            assert_eq!(f.max_label(), Some(k));
        }
        assert_eq!(lambda_l11(&named::cycle(5)).unwrap().0, 4);
        assert_eq!(lambda_l11(&named::path(4)).unwrap().0, 2);
        assert!(matches!(
            lambda_l11(&Graph::empty(2)),
            Err(Error::Disconnected { .. })
        ));
    }

    #[test]
    fn approx_examples() {
        let (k, f) = approx_lp1(&named::complete(3), 2).unwrap();
        assert_eq!(k, 4);
        let mut labels = f.into_vec();
        labels.sort_unstable();
        assert_eq!(labels, [0, 2, 4]);
        assert_eq!(approx_lp1(&named::path(3), 2).unwrap().0, 4);
        let c5 = named::cycle(5);
        assert_eq!(approx_lp1(&c5, 1).unwrap(), lambda_l11(&c5).unwrap());
    }

    #[test]
    fn reduction_preserves_two_balls_and_lambda() {
        for g in random_suite(51, 80, 2, 9, 0.7) {
            let x = reduction_cover(&g).unwrap();
            let h = delete_twin_edges(&g, &x).unwrap();
            for v in 0..g.n() {
                assert_eq!(closed_ball2(&g, v), closed_ball2(&h, v), "{g:?}");
            }
            let params = PqParams::new(1, 1).unwrap();
            assert_eq!(lambda_exact(&g, params).unwrap().0, lambda_exact(&h, params).unwrap().0);
        }
    }

    #[test]
    fn approximation_is_within_factor_p() {
        for g in random_suite(52, 40, 1, 8, 0.6) {
            for p in 2..=3 {
                let (k, f) = approx_lp1(&g, p).unwrap();
                let opt = lambda_exact(&g, PqParams::new(p, 1).unwrap()).unwrap().0;
                assert!(k >= opt && k <= p * opt);
                assert!(verify(&g, &f, PqParams::new(p, 1).unwrap()).unwrap().is_valid());
                assert!(verify(&g, &f, PqParams::new(p, p).unwrap()).unwrap().is_valid());
            }
        }
    }
}
