use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::parse_rational;
use crate::freealg::{Alphabet, NcPoly};
use crate::Q;

/// One serialized term: `{"word": "xxy", "coeff": "1"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub word: String,
    pub coeff: String,
}

/// Terms in word order; the empty word is written `"1"`.
pub fn poly_to_terms(p: &NcPoly, alphabet: &Alphabet) -> Vec<TermJson> {
    p.terms()
        .map(|(w, c)| TermJson {
            word: alphabet.format(w),
            coeff: c.to_string(),
        })
        .collect()
}

pub fn poly_from_terms(terms: &[TermJson], alphabet: &Alphabet) -> Result<NcPoly> {
    let mut p = NcPoly::zero(alphabet.len());
    for t in terms {
        let w = alphabet.parse(&t.word)?;
        let c: Q = parse_rational(&t.coeff)?;
        p.add_term(w, c);
    }
    Ok(p)
}

pub fn poly_to_json(p: &NcPoly, alphabet: &Alphabet) -> serde_json::Value {
    serde_json::to_value(poly_to_terms(p, alphabet)).expect("terms serialize")
}

pub fn poly_from_json(value: &serde_json::Value, alphabet: &Alphabet) -> Result<NcPoly> {
    let terms: Vec<TermJson> =
        serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    poly_from_terms(&terms, alphabet)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let ab = Alphabet::xy();
        let p = NcPoly::parse_simple(&ab, "xxy - 2 xyx + yxx").unwrap();
        let v = poly_to_json(&p, &ab);
        assert_eq!(v[0]["word"], "xxy");
        assert_eq!(v[1]["coeff"], "-2");
        assert_eq!(poly_from_json(&v, &ab).unwrap(), p);
    }
}
