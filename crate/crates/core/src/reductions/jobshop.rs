use crate::error::Result;
use crate::model::{JobShopInstance, PrecedenceDag, UmpsInstance};

/// Embeds a job shop as UMPS: one job per operation, chained in route order.
/// `origin[l]` is `(job, operation index)` of UMPS job `l`.
pub fn jobshop_to_umps(js: &JobShopInstance) -> Result<(UmpsInstance, Vec<(usize, usize)>)> {
    let mut lengths = Vec::with_capacity(js.operation_count());
    let mut home = Vec::with_capacity(js.operation_count());
    let mut edges = Vec::new();
    let mut origin = Vec::with_capacity(js.operation_count());
    for (j, chain) in js.jobs().iter().enumerate() {
        for (k, op) in chain.iter().enumerate() {
            let id = lengths.len();
            if k > 0 {
                edges.push((id - 1, id));
            }
            lengths.push(op.duration);
            home.push(op.machine);
            origin.push((j, k));
        }
    }
    let dag = PrecedenceDag::new(lengths.len(), edges)?;
    Ok((UmpsInstance::new(js.machines(), lengths, home, dag)?, origin))
}
