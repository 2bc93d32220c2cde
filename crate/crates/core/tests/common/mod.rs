//! Brute-force oracles shared by the integration tests and the acceptance
//! run. Each follows the textbook definition directly and shares no code
//! with the library beyond the image containers.

#![allow(dead_code)]

use std::collections::VecDeque;

use imgql::{Adjacency, BoolImage, GridDims, ScalarImage};
use rand::Rng;

pub fn random_mask(rng: &mut impl Rng, dims: GridDims, density: f64) -> BoolImage {
    BoolImage::from_fn(dims, |_, _| rng.gen_bool(density))
}

pub fn random_dims(rng: &mut impl Rng, max: usize) -> GridDims {
    GridDims::new(rng.gen_range(1..=max), rng.gen_range(1..=max)).unwrap()
}

/// Neighbours of `(x, y)`, itself excluded.
pub fn neighbours(dims: GridDims, adj: Adjacency, x: usize, y: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for dy in -1i64..=1 {
        for dx in -1i64..=1 {
            if (dx, dy) == (0, 0) {
                continue;
            }
            if adj == Adjacency::Orthogonal && dx != 0 && dy != 0 {
                continue;
            }
            let (nx, ny) = (x as i64 + dx, y as i64 + dy);
            if nx >= 0 && ny >= 0 && (nx as usize) < dims.width() && (ny as usize) < dims.height() {
                out.push((nx as usize, ny as usize));
            }
        }
    }
    out
}

/// Whether some path `x = p0, p1, …, pl` has `pl` in `end` and every
/// `p1 … p(l-1)` in `mid`. A path of length 0 counts.
pub fn path_exists(
    dims: GridDims,
    adj: Adjacency,
    start: (usize, usize),
    end: &BoolImage,
    mid: &BoolImage,
) -> bool {
    if end.get(start.0, start.1) {
        return true;
    }
    let mut seen = vec![false; dims.len()];
    let mut queue = VecDeque::from([start]);
    while let Some((x, y)) = queue.pop_front() {
        for (nx, ny) in neighbours(dims, adj, x, y) {
            if end.get(nx, ny) {
                return true;
            }
            let i = ny * dims.width() + nx;
            if mid.get(nx, ny) && !seen[i] {
                seen[i] = true;
                queue.push_back((nx, ny));
            }
        }
    }
    false
}

pub fn reach_oracle(target: &BoolImage, through: &BoolImage, adj: Adjacency) -> BoolImage {
    let dims = target.dims();
    BoolImage::from_fn(dims, |x, y| path_exists(dims, adj, (x, y), target, through))
}

pub fn surrounded_oracle(f1: &BoolImage, f2: &BoolImage, adj: Adjacency) -> BoolImage {
    let dims = f1.dims();
    let outside = BoolImage::from_fn(dims, |x, y| !f1.get(x, y) && !f2.get(x, y));
    let not_f2 = BoolImage::from_fn(dims, |x, y| !f2.get(x, y));
    BoolImage::from_fn(dims, |x, y| {
        f1.get(x, y) && !path_exists(dims, adj, (x, y), &outside, &not_f2)
    })
}

pub fn touch_oracle(f1: &BoolImage, f2: &BoolImage, adj: Adjacency) -> BoolImage {
    let dims = f1.dims();
    BoolImage::from_fn(dims, |x, y| f1.get(x, y) && path_exists(dims, adj, (x, y), f2, f1))
}

pub fn grow_oracle(f1: &BoolImage, f2: &BoolImage, adj: Adjacency) -> BoolImage {
    let dims = f1.dims();
    BoolImage::from_fn(dims, |x, y| {
        f1.get(x, y) || (f2.get(x, y) && path_exists(dims, adj, (x, y), f1, f2))
    })
}

pub fn closure_oracle(b: &BoolImage, adj: Adjacency) -> BoolImage {
    let dims = b.dims();
    BoolImage::from_fn(dims, |x, y| {
        b.get(x, y) || neighbours(dims, adj, x, y).iter().any(|&(nx, ny)| b.get(nx, ny))
    })
}

/// Minimum city-block distance to a true voxel, `inf` if there is none.
pub fn distance_oracle(b: &BoolImage) -> Vec<f64> {
    let dims = b.dims();
    let mut out = Vec::with_capacity(dims.len());
    for y in 0..dims.height() {
        for x in 0..dims.width() {
            let mut best = f64::INFINITY;
            for yy in 0..dims.height() {
                for xx in 0..dims.width() {
                    if b.get(xx, yy) {
                        best = best.min((x.abs_diff(xx) + y.abs_diff(yy)) as f64);
                    }
                }
            }
            out.push(best);
        }
    }
    out
}

/// Histogram by direct evaluation of `(i-1)Δ ≤ v - m < iΔ`, with `v = M`
/// in the last bin.
pub fn histogram_oracle(values: impl IntoIterator<Item = f64>, m: f64, big_m: f64, k: usize) -> Vec<u64> {
    let delta = (big_m - m) / k as f64;
    let mut h = vec![0u64; k];
    for v in values {
        if v == big_m {
            h[k - 1] += 1;
            continue;
        }
        for (i, slot) in h.iter_mut().enumerate() {
            let lo = i as f64 * delta;
            let hi = (i + 1) as f64 * delta;
            if lo <= v - m && v - m < hi {
                *slot += 1;
                break;
            }
        }
    }
    h
}

pub fn pearson_oracle(h1: &[u64], h2: &[u64]) -> f64 {
    let k = h1.len() as f64;
    let c1 = h1.iter().all(|&c| c == h1[0]);
    let c2 = h2.iter().all(|&c| c == h2[0]);
    if c1 && c2 {
        return 1.0;
    }
    if c1 || c2 {
        return 0.0;
    }
    let m1 = h1.iter().sum::<u64>() as f64 / k;
    let m2 = h2.iter().sum::<u64>() as f64 / k;
    let (mut num, mut s1, mut s2) = (0.0, 0.0, 0.0);
    for (&a, &b) in h1.iter().zip(h2) {
        let (da, db) = (a as f64 - m1, b as f64 - m2);
        num += da * db;
        s1 += da * da;
        s2 += db * db;
    }
    num / (s1 * s2).sqrt()
}

/// Per-voxel window histograms compared with the region histogram.
pub fn cross_correlation_oracle(
    radius: f64,
    a: &ScalarImage,
    b: &ScalarImage,
    region: &BoolImage,
    m: f64,
    big_m: f64,
    k: usize,
) -> Vec<f64> {
    let dims = a.dims();
    let half = radius.floor() as i64;
    let reference = histogram_oracle(
        (0..dims.len())
            .filter(|&i| region.bits()[i])
            .map(|i| b.values()[i]),
        m,
        big_m,
        k,
    );
    let mut out = Vec::with_capacity(dims.len());
    for y in 0..dims.height() as i64 {
        for x in 0..dims.width() as i64 {
            let mut window = Vec::new();
            for yy in (y - half)..=(y + half) {
                for xx in (x - half)..=(x + half) {
                    if xx >= 0 && yy >= 0 && (xx as usize) < dims.width() && (yy as usize) < dims.height() {
                        window.push(a.get(xx as usize, yy as usize));
                    }
                }
            }
            out.push(pearson_oracle(&histogram_oracle(window, m, big_m, k), &reference));
        }
    }
    out
}

/// `(tp, tn, fp, fn)` by counting.
pub fn confusion_oracle(pred: &BoolImage, truth: &BoolImage) -> (u64, u64, u64, u64) {
    let mut c = (0, 0, 0, 0);
    for (&p, &t) in pred.bits().iter().zip(truth.bits()) {
        match (p, t) {
            (true, true) => c.0 += 1,
            (false, false) => c.1 += 1,
            (true, false) => c.2 += 1,
            (false, true) => c.3 += 1,
        }
    }
    c
}

/// Parses rows of `#`/`.` into a mask.
pub fn mask(rows: &[&str]) -> BoolImage {
    let dims = GridDims::new(rows[0].len(), rows.len()).unwrap();
    BoolImage::from_fn(dims, |x, y| rows[y].as_bytes()[x] == b'#')
}
