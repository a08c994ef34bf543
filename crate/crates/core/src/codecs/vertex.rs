use super::order::{max_index, min_index, usable_indices};
use super::{check_capacity, BitSequence, ChannelCodec, ChannelId, CodecError};
use crate::stl::StlModel;

/// Facets that can carry a vertex bit: all non-degenerate ones.
pub fn vertex_slots(model: &StlModel) -> Vec<usize> {
    usable_indices(&model.facets)
}

/// Bit 1 lists the largest vertex first; bit 0 lists the smallest first.
pub fn embed_vertex(model: &StlModel, payload: &BitSequence) -> Result<StlModel, CodecError> {
    let slots = vertex_slots(model);
    check_capacity(ChannelId::Vertex, payload.len(), slots.len())?;
    let mut out = model.clone();
    for (bit, &i) in payload.iter().zip(&slots) {
        let f = &mut out.facets[i];
        let first = if bit { max_index(f) } else { min_index(f) };
        *f = f.rotated_to(first);
    }
    Ok(out)
}

/// Bit `i` is 1 iff the first listed vertex of usable facet `i` is its largest.
pub fn extract_vertex(model: &StlModel, bits: usize) -> Result<BitSequence, CodecError> {
    let slots = vertex_slots(model);
    check_capacity(ChannelId::Vertex, bits, slots.len())?;
    Ok(slots[..bits].iter().map(|&i| max_index(&model.facets[i]) == 0).collect())
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VertexCodec;

impl ChannelCodec for VertexCodec {
    type Carrier = StlModel;

    fn id(&self) -> ChannelId {
        ChannelId::Vertex
    }

    fn capacity(&self, carrier: &StlModel) -> usize {
        vertex_slots(carrier).len()
    }

    fn embed(&self, carrier: &StlModel, payload: &BitSequence) -> Result<StlModel, CodecError> {
        embed_vertex(carrier, payload)
    }

    fn extract(&self, carrier: &StlModel, bits: usize) -> Result<BitSequence, CodecError> {
        extract_vertex(carrier, bits)
    }
}
