//! Canonical JSON encoding of group elements.
//!
//! The encoding is structural and canonical: lamp entries are emitted in
//! the element's own sorted order and identity-valued lamps never appear
//! (validation guarantees the latter), so equal elements always serialize
//! to the same bytes. That makes [`element_key`] usable as a map key for
//! exact distributions.
//!
//! Shapes:
//! - `C2`: `0` or `1`
//! - `Z`: an integer
//! - `Z2`: `[x, y]`
//! - wreath: `{"lamps": [[point, value], ...], "position": ...}`

use super::element::{validate, Element, WreathElement};
use super::GroupSpec;
use crate::{Error, Result};
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Encode an element as a JSON value.
pub fn element_to_json(elem: &Element) -> Value {
    match elem {
        Element::Bit(b) => json!(*b as u8),
        Element::Line(n) => json!(n),
        Element::Grid(x, y) => json!([x, y]),
        Element::Wreath(w) => {
            let lamps: Vec<Value> = w
                .lamps
                .iter()
                .map(|(p, v)| json!([element_to_json(p), element_to_json(v)]))
                .collect();
            json!({ "lamps": lamps, "position": element_to_json(&w.position) })
        }
    }
}

/// Decode an element of `spec` from a JSON value, validating shape and
/// canonicity.
pub fn element_from_json(spec: &GroupSpec, value: &Value) -> Result<Element> {
    let elem = decode(spec, value)?;
    validate(spec, &elem)?;
    Ok(elem)
}

fn decode(spec: &GroupSpec, value: &Value) -> Result<Element> {
    match spec {
        GroupSpec::CyclicTwo => match value.as_u64() {
            Some(0) => Ok(Element::Bit(false)),
            Some(1) => Ok(Element::Bit(true)),
            _ => Err(Error::mismatch(spec, "expected 0 or 1")),
        },
        GroupSpec::IntegerLine => value
            .as_i64()
            .map(Element::Line)
            .ok_or_else(|| Error::mismatch(spec, "expected an integer")),
        GroupSpec::IntegerGrid => {
            let pair = value
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::mismatch(spec, "expected [x, y]"))?;
            let x = pair[0]
                .as_i64()
                .ok_or_else(|| Error::mismatch(spec, "x must be an integer"))?;
            let y = pair[1]
                .as_i64()
                .ok_or_else(|| Error::mismatch(spec, "y must be an integer"))?;
            Ok(Element::Grid(x, y))
        }
        GroupSpec::Wreath(lamp, base) => {
            let obj = value
                .as_object()
                .ok_or_else(|| Error::mismatch(spec, "expected a lamps/position object"))?;
            let lamps_val = obj
                .get("lamps")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::mismatch(spec, "missing lamps array"))?;
            let position_val = obj
                .get("position")
                .ok_or_else(|| Error::mismatch(spec, "missing position"))?;
            let mut lamps = BTreeMap::new();
            for entry in lamps_val {
                let pair = entry
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| Error::mismatch(spec, "lamp entries are [point, value]"))?;
                let point = decode(base, &pair[0])?;
                let val = decode(lamp, &pair[1])?;
                if lamps.insert(point, val).is_some() {
                    return Err(Error::mismatch(spec, "duplicate lamp point"));
                }
            }
            let position = decode(base, position_val)?;
            Ok(Element::Wreath(Box::new(WreathElement { lamps, position })))
        }
    }
}

/// Compact canonical string form, suitable as a hash or file key.
pub fn element_key(elem: &Element) -> String {
    element_to_json(elem).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::element::{identity, multiply, standard_generators};

    fn roundtrip(spec: &GroupSpec, elem: &Element) {
        let encoded = element_to_json(elem);
        let decoded = element_from_json(spec, &encoded).unwrap();
        assert_eq!(&decoded, elem);
    }

    #[test]
    fn roundtrips_products_of_generators() {
        for name in ["C2", "Z", "Z2", "C2 wr Z", "C2 wr Z2", "(C2 wr Z2) wr Z2"] {
            let spec = GroupSpec::parse(name).unwrap();
            let gens = standard_generators(&spec);
            let mut elem = identity(&spec);
            roundtrip(&spec, &elem);
            for g in gens.iter().cycle().take(12) {
                elem = multiply(&spec, &elem, g).unwrap();
                roundtrip(&spec, &elem);
            }
        }
    }

    #[test]
    fn key_is_canonical_for_equal_elements() {
        let spec = GroupSpec::parse("C2 wr Z").unwrap();
        let gens = standard_generators(&spec);
        // switch · move · move · switch‑back at a different point, assembled
        // in two different orders, giving equal elements.
        let a = multiply(&spec, &gens[0], &gens[1]).unwrap();
        let b = multiply(&spec, &gens[1], &gens[0]).unwrap();
        assert_ne!(element_key(&a), element_key(&b));
        let a2 = multiply(&spec, &a, &identity(&spec)).unwrap();
        assert_eq!(element_key(&a), element_key(&a2));
    }

    #[test]
    fn rejects_wrong_shape() {
        let spec = GroupSpec::parse("C2 wr Z").unwrap();
        assert!(element_from_json(&spec, &serde_json::json!(3)).is_err());
        assert!(element_from_json(&spec, &serde_json::json!({"lamps": []})).is_err());
        let dup = serde_json::json!({"lamps": [[0, 1], [0, 1]], "position": 0});
        assert!(element_from_json(&spec, &dup).is_err());
    }

    #[test]
    fn rejects_noncanonical_identity_lamp() {
        let spec = GroupSpec::parse("C2 wr Z").unwrap();
        let off = serde_json::json!({"lamps": [[0, 0]], "position": 0});
        assert!(element_from_json(&spec, &off).is_err());
    }
}
