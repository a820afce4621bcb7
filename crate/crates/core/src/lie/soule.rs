use crate::error::{Error, Result};
use crate::freealg::Alphabet;
use crate::lie::{parse_bracket_expr, LieElem};

const SIGMA3: &str = "[x,[x,y]] - [y,[y,x]]";

const SIGMA5: &str = "2[x,[x,[x,[x,y]]]] - 2[y,[y,[y,[y,x]]]] \
    + 4[x,[x,[y,[x,y]]]] - 4[y,[y,[x,[y,x]]]] \
    - 3[[x,y],[x,[x,y]]] + 3[[y,x],[y,[y,x]]]";

/// The Soulé elements of weight 3 and 5 with integer coefficients.
/// Higher weights come out of the linear solver in `grt`.
pub fn soule(m: usize) -> Result<LieElem> {
    let text = match m {
        3 => SIGMA3,
        5 => SIGMA5,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "hardcoded Soulé elements exist for weights 3 and 5, not {m}"
            )))
        }
    };
    parse_bracket_expr(&Alphabet::xy(), text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::Selector;
    use crate::lie::{ad_power, is_lie};

    #[test]
    fn leading_terms() {
        let s3 = soule(3).unwrap();
        let s5 = soule(5).unwrap();
        assert!(is_lie(s3.body()) && is_lie(s5.body()));
        assert_eq!(s3.component(Selector::Bidegree(2, 1)), ad_power(2));
        assert_eq!(
            s5.component(Selector::Bidegree(4, 1)),
            ad_power(4).scale_i64(2)
        );
        assert_eq!(s3.depth(), Some(1));
        assert_eq!(s5.depth(), Some(1));
        assert!(soule(7).is_err());
    }
}
