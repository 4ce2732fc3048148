use crate::error::{Error, Result};
use crate::permutation::GraphPermutation;
use crate::spec::GraphSpec;

/// Draws a witness on a two-dimensional board, row 1 at the top. Each cell
/// shows where its occupant moves: `^ v < >` for grid steps, `*` for a fixed
/// point, `%` for a wrap-around edge.
pub fn render_board(spec: &GraphSpec, perm: &GraphPermutation) -> Result<String> {
    let (m, n) = spec
        .grid_dims()
        .ok_or_else(|| Error::InvalidDimensions(format!("{spec} is not a two-dimensional board")))?;
    let graph = spec.build()?;
    let perm = GraphPermutation::new(&graph, perm.succ().to_vec())?;
    let mut out = String::with_capacity(m * (n + 1));
    for x in 0..m {
        for y in 0..n {
            let v = x * n + y;
            let w = perm.apply(v);
            let (wx, wy) = (w / n, w % n);
            let c = if w == v {
                '*'
            } else if wy == y && wx + 1 == x {
                '^'
            } else if wy == y && wx == x + 1 {
                'v'
            } else if wx == x && wy + 1 == y {
                '<'
            } else if wx == x && wy == y + 1 {
                '>'
            } else {
                '%'
            };
            out.push(c);
        }
        out.push('\n');
    }
    Ok(out)
}
