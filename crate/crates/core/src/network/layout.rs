//! Force-directed layout (Fruchterman–Reingold) in the unit square.
//!
//! Repulsion k²/d between all node pairs, attraction d²/k along edges,
//! displacement capped by a linearly cooling temperature. Positions start
//! from a seeded generator, so a fixed seed reproduces coordinates exactly.
//! The final layout is recentered on the frame center (and uniformly shrunk
//! if needed), which also pins the trivial cases: a single node sits at the
//! center, a connected pair is symmetric about it.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::network::UserGraph;

const EPSILON: f64 = 1e-9;

fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    // 53 high bits, uniform in [0,1)
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// 2-D positions for every node, indexed like `graph.nodes`.
pub fn layout_force_directed(
    graph: &UserGraph,
    iterations: usize,
    seed: u64,
) -> Result<Vec<(f64, f64)>> {
    if iterations == 0 {
        return Err(Error::InvalidConfig("iterations must be >= 1".into()));
    }
    let n = graph.node_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<(f64, f64)> = (0..n)
        .map(|_| (unit_f64(&mut rng), unit_f64(&mut rng)))
        .collect();
    if n == 1 {
        return Ok(vec![(0.5, 0.5)]);
    }

    let k = (1.0 / n as f64).sqrt();
    let t0 = 0.1;
    let mut disp = vec![(0.0f64, 0.0f64); n];

    for iter in 0..iterations {
        for d in disp.iter_mut() {
            *d = (0.0, 0.0);
        }
        // repulsion between every pair
        for i in 0..n {
            for j in i + 1..n {
                let dx = pos[i].0 - pos[j].0;
                let dy = pos[i].1 - pos[j].1;
                let dist = (dx * dx + dy * dy).sqrt().max(EPSILON);
                let force = k * k / dist;
                let (ux, uy) = (dx / dist, dy / dist);
                disp[i].0 += ux * force;
                disp[i].1 += uy * force;
                disp[j].0 -= ux * force;
                disp[j].1 -= uy * force;
            }
        }
        // attraction along edges (band and weight ignored)
        for edge in &graph.edges {
            let (i, j) = (edge.a, edge.b);
            let dx = pos[i].0 - pos[j].0;
            let dy = pos[i].1 - pos[j].1;
            let dist = (dx * dx + dy * dy).sqrt().max(EPSILON);
            let force = dist * dist / k;
            let (ux, uy) = (dx / dist, dy / dist);
            disp[i].0 -= ux * force;
            disp[i].1 -= uy * force;
            disp[j].0 += ux * force;
            disp[j].1 += uy * force;
        }
        // cap by temperature, cooling linearly to zero
        let t = t0 * (1.0 - iter as f64 / iterations as f64);
        for i in 0..n {
            let (dx, dy) = disp[i];
            let len = (dx * dx + dy * dy).sqrt();
            if len > EPSILON {
                let step = len.min(t);
                pos[i].0 += dx / len * step;
                pos[i].1 += dy / len * step;
            }
            pos[i].0 = pos[i].0.clamp(0.0, 1.0);
            pos[i].1 = pos[i].1.clamp(0.0, 1.0);
        }
    }

    recenter(&mut pos);
    Ok(pos)
}

/// Translate the centroid to (0.5, 0.5), then shrink uniformly about the
/// center until everything fits the unit frame.
fn recenter(pos: &mut [(f64, f64)]) {
    let n = pos.len() as f64;
    let cx = pos.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = pos.iter().map(|p| p.1).sum::<f64>() / n;
    let mut spread = 0.0f64;
    for p in pos.iter_mut() {
        p.0 += 0.5 - cx;
        p.1 += 0.5 - cy;
        spread = spread.max((p.0 - 0.5).abs()).max((p.1 - 0.5).abs());
    }
    if spread > 0.5 {
        let scale = 0.5 / spread;
        for p in pos.iter_mut() {
            p.0 = 0.5 + (p.0 - 0.5) * scale;
            p.1 = 0.5 + (p.1 - 0.5) * scale;
        }
    }
}
