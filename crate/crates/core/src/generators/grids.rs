use crate::error::{Error, Result};
use crate::graph::{contains_k22, Graph};
use crate::instance::SspInstance;

fn check_dims(w: usize, h: usize) -> Result<()> {
    if w * h < 2 {
        return Err(Error::Precondition("grid needs at least two vertices".into()));
    }
    Ok(())
}

/// `w × h` square grid, vertex `y·w + x`; s is the first corner and t the
/// opposite one.
pub fn gen_grid(w: usize, h: usize, k: u64, l: u64) -> Result<SspInstance> {
    check_dims(w, h)?;
    let id = |x: usize, y: usize| y * w + x;
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < h {
                edges.push((id(x, y), id(x, y + 1)));
            }
        }
    }
    let g = Graph::from_edges(w * h, edges)?;
    SspInstance::new(g, 0, w * h - 1, k, l)
}

/// Hexagonal grid in brick-wall form: all horizontal edges, and the vertical
/// edge below `(x, y)` iff `x + y` is even. A single column degenerates to a
/// path.
pub fn gen_hex_grid(w: usize, h: usize, k: u64, l: u64) -> Result<SspInstance> {
    check_dims(w, h)?;
    let id = |x: usize, y: usize| y * w + x;
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < h && (w == 1 || (x + y) % 2 == 0) {
                edges.push((id(x, y), id(x, y + 1)));
            }
        }
    }
    let g = Graph::from_edges(w * h, edges)?;
    if contains_k22(&g) {
        return Err(Error::Invariant("hex grid contains a 4-cycle".into()));
    }
    SspInstance::new(g, 0, w * h - 1, k, l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_grid_is_k22_free_and_connected() {
        for (w, h) in [(1, 3), (2, 2), (3, 3), (4, 5), (6, 2)] {
            let i = gen_hex_grid(w, h, 4, 1).unwrap();
            assert!(!contains_k22(&i.graph));
            assert!(i.graph.is_connected(), "{w}x{h}");
            assert!((0..i.graph.n()).all(|v| i.graph.degree(v) <= 3));
        }
    }

    #[test]
    fn square_grid() {
        let c4 = gen_grid(2, 2, 3, 0).unwrap();
        assert!(contains_k22(&c4.graph));
        let g = gen_grid(4, 3, 5, 2).unwrap();
        assert!(g.graph.is_connected());
        assert_eq!(g.graph.m(), 3 * 3 + 4 * 2);
        assert!(gen_grid(1, 1, 2, 0).is_err());
    }
}
