//! JSON logs for solved games: verdict, certificate moves and position
//! statistics, schema `alc-gametrace-v1`.

use serde::Serialize;

use crate::games::element_game::{ElementSolution, MoveTree, TreeNode};
use crate::games::AtomicSolution;

#[derive(Serialize)]
struct TraceDto<'a> {
    schema: &'a str,
    game: &'a str,
    verdict: &'a crate::games::GameVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    positions: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    survivors: Option<usize>,
}

fn move_tree_json(tree: &MoveTree) -> serde_json::Value {
    fn node(n: &TreeNode) -> serde_json::Value {
        match n {
            TreeNode::Broken => serde_json::json!({"outcome": "broken"}),
            TreeNode::Inner(t) => serde_json::json!({
                "move": t.mv,
                "accept": node(&t.accept),
                "reject": node(&t.reject),
            }),
        }
    }
    serde_json::json!({
        "move": tree.mv,
        "accept": node(&tree.accept),
        "reject": node(&tree.reject),
    })
}

pub fn element_trace_json(sol: &ElementSolution) -> String {
    let dto = TraceDto {
        schema: "alc-gametrace-v1",
        game: "element",
        verdict: &sol.verdict,
        certificate: sol.certificate.as_ref().map(move_tree_json),
        positions: None,
        survivors: None,
    };
    serde_json::to_string_pretty(&dto).expect("trace serializes")
}

pub fn atomic_trace_json(sol: &AtomicSolution) -> String {
    // stage histogram keeps the log bounded
    let mut stages: Vec<usize> = sol.die_stage.values().copied().collect();
    stages.sort_unstable();
    let dto = TraceDto {
        schema: "alc-gametrace-v1",
        game: "atomic",
        verdict: &sol.verdict,
        certificate: Some(serde_json::json!({
            "death_stages": stages,
        })),
        positions: Some(sol.positions),
        survivors: Some(sol.survivors),
    };
    serde_json::to_string_pretty(&dto).expect("trace serializes")
}
