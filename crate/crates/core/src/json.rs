use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// Serializes a float as a JSON number with exactly six decimals.
pub(crate) fn fixed6<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if !x.is_finite() {
        return Err(S::Error::custom(format!("non-finite value {x}")));
    }
    let raw = RawValue::from_string(format!("{x:.6}")).map_err(S::Error::custom)?;
    raw.serialize(s)
}
