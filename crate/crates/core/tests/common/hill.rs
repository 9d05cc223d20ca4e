use rand_chacha::ChaCha8Rng;
use shintani_core::cones::GLTuple;
use shintani_core::exact::int;
use shintani_core::linalg::QVec;

use super::{random_int_vec, random_sl, random_vec};

pub fn nondegenerate_tuple(r: &mut ChaCha8Rng, n: usize) -> GLTuple {
    loop {
        let alphas = (0..n).map(|_| random_sl(r, n, 6)).collect();
        let t = GLTuple::standard(alphas).unwrap();
        if !t.is_degenerate() {
            return t;
        }
    }
}

/// Points on boundary rays and faces of `C(α₁w₁,…)` as well as generic ones.
pub fn sample_points(r: &mut ChaCha8Rng, t: &GLTuple, count: usize) -> Vec<QVec> {
    let u = t.leading_vectors();
    let n = t.dim();
    let mut pts = Vec::new();
    for k in 0..count {
        if k % 2 == 0 {
            pts.push(random_vec(r, n, 5));
        } else {
            let coeffs = random_int_vec(r, n, 2);
            let v = u.iter().zip(&coeffs).fold(vec![int(0); n], |acc, (g, c)| {
                acc.iter().zip(g).map(|(a, b)| a + b * c.clone()).collect()
            });
            if v.iter().any(|x| *x != int(0)) {
                pts.push(v);
            }
        }
    }
    pts
}
