use super::order::is_degenerate;
use super::{check_capacity, BitSequence, ChannelCodec, ChannelId, CodecError};
use crate::stl::{Facet, StlModel, Vec3};

/// Facets with distinct vertices and a defined right-hand-rule normal.
pub fn normal_slots(model: &StlModel) -> Vec<usize> {
    model
        .facets
        .iter()
        .enumerate()
        .filter(|(_, f)| !is_degenerate(f) && f.rhr_normal().is_some())
        .map(|(i, _)| i)
        .collect()
}

/// Bit 0 stores the RHR unit normal, bit 1 its negation.
pub fn embed_normal(model: &StlModel, payload: &BitSequence) -> Result<StlModel, CodecError> {
    let slots = normal_slots(model);
    check_capacity(ChannelId::Normal, payload.len(), slots.len())?;
    let mut out = model.clone();
    for (bit, &i) in payload.iter().zip(&slots) {
        let f = &mut out.facets[i];
        let n = f.rhr_normal().expect("slot has a normal");
        f.normal = if bit { n.neg() } else { n };
    }
    Ok(out)
}

fn decode(f: &Facet) -> bool {
    let n = f.rhr_normal().expect("slot has a normal");
    let s: Vec3 = f.normal;
    let dot = s.x as f64 * n.x as f64 + s.y as f64 * n.y as f64 + s.z as f64 * n.z as f64;
    // zero-length stored normals decode as 0
    dot < 0.0
}

pub fn extract_normal(model: &StlModel, bits: usize) -> Result<BitSequence, CodecError> {
    let slots = normal_slots(model);
    check_capacity(ChannelId::Normal, bits, slots.len())?;
    Ok(slots[..bits].iter().map(|&i| decode(&model.facets[i])).collect())
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NormalCodec;

impl ChannelCodec for NormalCodec {
    type Carrier = StlModel;

    fn id(&self) -> ChannelId {
        ChannelId::Normal
    }

    fn capacity(&self, carrier: &StlModel) -> usize {
        normal_slots(carrier).len()
    }

    fn embed(&self, carrier: &StlModel, payload: &BitSequence) -> Result<StlModel, CodecError> {
        embed_normal(carrier, payload)
    }

    fn extract(&self, carrier: &StlModel, bits: usize) -> Result<BitSequence, CodecError> {
        extract_normal(carrier, bits)
    }
}
