use super::{Arrangement, ProjLine};
use crate::error::{Error, Result};
use crate::field::CycloNumber;

pub const NAMED_ARRANGEMENTS: [&str; 5] = ["braid", "pappus-dual", "ex-3-1-iii", "ceva3", "hesse"];

/// Built-in arrangements; lines are listed in the order of the factors of
/// their defining polynomial.
pub fn named_arrangement(name: &str) -> Result<Arrangement> {
    match name {
        // xyz(x-y)(x-z)(y-z)
        "braid" => Arrangement::from_int_lines(
            name,
            &[
                [1, 0, 0],
                [0, 1, 0],
                [0, 0, 1],
                [1, -1, 0],
                [1, 0, -1],
                [0, 1, -1],
            ],
        ),
        // xyz(x-y)(y-z)(x-y-z)(2x+y+z)(2x+y-z)(2x-5y+z)
        "pappus-dual" => Arrangement::from_int_lines(
            name,
            &[
                [1, 0, 0],
                [0, 1, 0],
                [0, 0, 1],
                [1, -1, 0],
                [0, 1, -1],
                [1, -1, -1],
                [2, 1, 1],
                [2, 1, -1],
                [2, -5, 1],
            ],
        ),
        // xyz(x+y)(y+z)(x+3z)(x+2y+z)(x+2y+3z)(2x+3y+3z)
        "ex-3-1-iii" => Arrangement::from_int_lines(
            name,
            &[
                [1, 0, 0],
                [0, 1, 0],
                [0, 0, 1],
                [1, 1, 0],
                [0, 1, 1],
                [1, 0, 3],
                [1, 2, 1],
                [1, 2, 3],
                [2, 3, 3],
            ],
        ),
        // (x³-y³)(x³-z³)(y³-z³), each cubic split as ∏_i (u - ζ₃^i v)
        "ceva3" => {
            let zero = CycloNumber::zero(3);
            let one = CycloNumber::one(3);
            let mut lines = Vec::new();
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                for i in 0..3 {
                    let mut c = [zero.clone(), zero.clone(), zero.clone()];
                    c[a] = one.clone();
                    c[b] = -CycloNumber::zeta_pow(3, i);
                    let [x, y, z] = c;
                    lines.push(ProjLine::new(x, y, z)?);
                }
            }
            Arrangement::new(name, lines)
        }
        // xyz ∏_{i,j=0..2} (θ^i x + θ^j y + z), θ = ζ₃
        "hesse" => {
            let zero = CycloNumber::zero(3);
            let one = CycloNumber::one(3);
            let mut lines = vec![
                ProjLine::new(one.clone(), zero.clone(), zero.clone())?,
                ProjLine::new(zero.clone(), one.clone(), zero.clone())?,
                ProjLine::new(zero.clone(), zero.clone(), one.clone())?,
            ];
            for i in 0..3 {
                for j in 0..3 {
                    lines.push(ProjLine::new(
                        CycloNumber::zeta_pow(3, i),
                        CycloNumber::zeta_pow(3, j),
                        one.clone(),
                    )?);
                }
            }
            Arrangement::new(name, lines)
        }
        _ => Err(Error::UnknownArrangement {
            name: name.to_string(),
            valid: NAMED_ARRANGEMENTS.join(", "),
        }),
    }
}
