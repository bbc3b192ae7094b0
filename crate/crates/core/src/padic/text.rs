//! Serde support through the canonical text forms.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{CycloElement, Jet, PadicScalar};

impl Serialize for PadicScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for CycloElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for Jet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Jet", 2)?;
        st.serialize_field("value", &self.value)?;
        st.serialize_field("deriv", &self.deriv)?;
        st.end()
    }
}

/// Deserializes a scalar whose prime is taken from the text itself; the
/// exact zero `0` needs the prime from context and is rejected here.
impl<'de> Deserialize<'de> for PadicScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        let prime = text
            .trim()
            .split('^')
            .next()
            .and_then(|p| p.trim().parse::<u32>().ok())
            .ok_or_else(|| D::Error::custom(format!("cannot infer prime from {text:?}")))?;
        PadicScalar::parse(&text, prime).map_err(D::Error::custom)
    }
}
