//! Stego channel codecs.
//!
//! Each channel has exactly one fixed encoding here. They exist to load test
//! carriers with payloads and to score the sanitizer; the sanitizer itself
//! never consults them.
//!
//! | channel       | bit 1                                  | bit 0                       |
//! |---------------|----------------------------------------|-----------------------------|
//! | `facet`       | first facet of a pair is greater       | first facet is smaller      |
//! | `vertex`      | largest vertex listed first            | smallest vertex listed first|
//! | `normal`      | stored normal opposes the RHR normal   | stored normal is RHR normal |
//! | `number`      | token in scientific notation           | token in standard notation  |
//! | `whitespace`  | line indentation contains a tab        | indentation is spaces only  |
//! | `robust-pair` | canonical pair 1 > canonical pair 2    | otherwise                   |

mod bits;
mod facet;
mod normal;
pub mod order;
mod robust;
mod text;
mod vertex;

use std::fmt;
use std::str::FromStr;

pub use bits::BitSequence;
pub use facet::{embed_facet, extract_facet, facet_pairs, FacetCodec};
pub use normal::{embed_normal, extract_normal, normal_slots, NormalCodec};
pub use order::{canonical_vertex_rotation, compare_facets, is_degenerate, max_vertex, vertex_cmp};
pub use robust::{embed_robust_pair, extract_robust_pair, robust_quads, RobustPairCodec};
pub use text::{
    embed_number, embed_whitespace, extract_number, extract_whitespace, NumberCodec, RawAsciiDocument,
    WhitespaceCodec,
};
pub use vertex::{embed_vertex, extract_vertex, vertex_slots, VertexCodec};

use crate::stl::{self, StlError, StlFormat, StlModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChannelId {
    Facet,
    Vertex,
    Normal,
    Number,
    Whitespace,
    RobustPair,
}

impl ChannelId {
    pub const ALL: [ChannelId; 6] = [
        ChannelId::Facet,
        ChannelId::Vertex,
        ChannelId::Normal,
        ChannelId::Number,
        ChannelId::Whitespace,
        ChannelId::RobustPair,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelId::Facet => "facet",
            ChannelId::Vertex => "vertex",
            ChannelId::Normal => "normal",
            ChannelId::Number => "number",
            ChannelId::Whitespace => "whitespace",
            ChannelId::RobustPair => "robust-pair",
        }
    }

    /// Channels that only exist in the raw text of an ASCII file.
    pub fn is_text_only(self) -> bool {
        matches!(self, ChannelId::Number | ChannelId::Whitespace)
    }
}

impl fmt::Display for ChannelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelId {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ChannelId::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s) || (c.name().replace('-', "_") == s.to_ascii_lowercase()))
            .ok_or_else(|| CodecError::UnknownChannel(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("unknown channel {0:?}")]
    UnknownChannel(String),
    #[error("{channel} channel unavailable: {reason}")]
    ChannelUnavailable { channel: ChannelId, reason: &'static str },
    #[error("{channel} channel holds {capacity} bits, {requested} requested")]
    CapacityExceeded {
        channel: ChannelId,
        requested: usize,
        capacity: usize,
    },
    #[error("facet has repeated vertices")]
    DegenerateFacet,
    #[error(transparent)]
    Stl(#[from] StlError),
}

pub(crate) fn check_capacity(channel: ChannelId, requested: usize, capacity: usize) -> Result<(), CodecError> {
    if requested > capacity {
        Err(CodecError::CapacityExceeded {
            channel,
            requested,
            capacity,
        })
    } else {
        Ok(())
    }
}

/// One fixed embed/extract strategy over one stego channel.
pub trait ChannelCodec {
    type Carrier;

    fn id(&self) -> ChannelId;
    fn capacity(&self, carrier: &Self::Carrier) -> usize;
    fn embed(&self, carrier: &Self::Carrier, payload: &BitSequence) -> Result<Self::Carrier, CodecError>;
    fn extract(&self, carrier: &Self::Carrier, bits: usize) -> Result<BitSequence, CodecError>;
}

/// A loaded STL file as seen by the codecs.
///
/// ASCII files keep their raw text so the number and whitespace channels can
/// be read; binary files (and anything re-serialized canonically) are models.
#[derive(Debug, Clone, PartialEq)]
pub enum Carrier {
    Model(StlModel),
    Text(RawAsciiDocument),
}

impl Carrier {
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, StlError> {
        match stl::detect_format(bytes) {
            Ok(StlFormat::Ascii) => {
                let text = std::str::from_utf8(bytes).map_err(|_| StlError::NotText)?;
                Ok(Carrier::Text(RawAsciiDocument::parse(text)?))
            }
            Ok(StlFormat::Binary) => Ok(Carrier::Model(stl::parse_binary(bytes)?)),
            // re-parse for the more specific error
            Err(_) => stl::parse(bytes).map(Carrier::Model),
        }
    }

    pub fn model(&self) -> &StlModel {
        match self {
            Carrier::Model(m) => m,
            Carrier::Text(d) => d.model(),
        }
    }

    pub fn into_model(self) -> StlModel {
        match self {
            Carrier::Model(m) => m,
            Carrier::Text(d) => d.into_model(),
        }
    }

    pub fn format(&self) -> StlFormat {
        self.model().source_format
    }

    /// Serialize: raw text as-is, models through the canonical writer of `format`.
    pub fn to_bytes(&self, format: StlFormat) -> Vec<u8> {
        match (self, format) {
            (Carrier::Text(d), StlFormat::Ascii) => d.as_str().as_bytes().to_vec(),
            _ => stl::write(self.model(), format),
        }
    }
}

impl From<StlModel> for Carrier {
    fn from(m: StlModel) -> Self {
        Carrier::Model(m)
    }
}

impl From<RawAsciiDocument> for Carrier {
    fn from(d: RawAsciiDocument) -> Self {
        Carrier::Text(d)
    }
}

fn text_of(carrier: &Carrier, channel: ChannelId) -> Result<&RawAsciiDocument, CodecError> {
    match carrier {
        Carrier::Text(doc) => Ok(doc),
        Carrier::Model(m) => Err(CodecError::ChannelUnavailable {
            channel,
            reason: match m.source_format {
                StlFormat::Binary => "binary STL has no textual representation",
                StlFormat::Ascii => "raw ASCII text was not retained",
            },
        }),
    }
}

/// Bits the channel can carry in this carrier under its fixed encoding.
pub fn capacity(carrier: &Carrier, channel: ChannelId) -> Result<usize, CodecError> {
    Ok(match channel {
        ChannelId::Facet => FacetCodec.capacity(carrier.model()),
        ChannelId::Vertex => VertexCodec.capacity(carrier.model()),
        ChannelId::Normal => NormalCodec.capacity(carrier.model()),
        ChannelId::RobustPair => RobustPairCodec.capacity(carrier.model()),
        ChannelId::Number => NumberCodec.capacity(text_of(carrier, channel)?),
        ChannelId::Whitespace => WhitespaceCodec.capacity(text_of(carrier, channel)?),
    })
}

/// Embed into a geometric channel yields a model (raw text is not kept);
/// embed into a text channel yields text.
pub fn embed(carrier: &Carrier, channel: ChannelId, payload: &BitSequence) -> Result<Carrier, CodecError> {
    Ok(match channel {
        ChannelId::Facet => FacetCodec.embed(carrier.model(), payload)?.into(),
        ChannelId::Vertex => VertexCodec.embed(carrier.model(), payload)?.into(),
        ChannelId::Normal => NormalCodec.embed(carrier.model(), payload)?.into(),
        ChannelId::RobustPair => RobustPairCodec.embed(carrier.model(), payload)?.into(),
        ChannelId::Number => NumberCodec.embed(text_of(carrier, channel)?, payload)?.into(),
        ChannelId::Whitespace => WhitespaceCodec.embed(text_of(carrier, channel)?, payload)?.into(),
    })
}

pub fn extract(carrier: &Carrier, channel: ChannelId, bits: usize) -> Result<BitSequence, CodecError> {
    match channel {
        ChannelId::Facet => FacetCodec.extract(carrier.model(), bits),
        ChannelId::Vertex => VertexCodec.extract(carrier.model(), bits),
        ChannelId::Normal => NormalCodec.extract(carrier.model(), bits),
        ChannelId::RobustPair => RobustPairCodec.extract(carrier.model(), bits),
        ChannelId::Number => NumberCodec.extract(text_of(carrier, channel)?, bits),
        ChannelId::Whitespace => WhitespaceCodec.extract(text_of(carrier, channel)?, bits),
    }
}
