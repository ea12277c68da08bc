//! WebSocket session server.
//!
//! `GET /ws` upgrades to a WebSocket. Each text frame carries one or more
//! newline-delimited client messages; every server message goes out as its
//! own text frame. Each connection gets a private engine. `GET /scene`
//! returns the scene JSON.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use sonohaptics_core::crossmodal::PresetTable;
use sonohaptics_core::engine::Engine;
use tokio::net::TcpListener;

use crate::protocol::Session;
use crate::scene_io::scene_to_json;

#[derive(Clone)]
struct Shared {
    engine: Arc<Engine>,
    presets: Arc<PresetTable>,
}

pub fn router(engine: Engine, presets: PresetTable) -> Router {
    let shared = Shared { engine: Arc::new(engine), presets: Arc::new(presets) };
    Router::new().route("/ws", get(upgrade)).route("/scene", get(scene)).with_state(shared)
}

async fn scene(State(shared): State<Shared>) -> Response {
    ([("content-type", "application/json")], scene_to_json(shared.engine.scene())).into_response()
}

async fn upgrade(ws: WebSocketUpgrade, State(shared): State<Shared>) -> Response {
    ws.on_upgrade(move |socket| run_session(socket, shared))
}

async fn run_session(mut socket: WebSocket, shared: Shared) {
    let mut session = Session::new((*shared.engine).clone(), (*shared.presets).clone());
    while let Some(Ok(frame)) = socket.recv().await {
        let text = match frame {
            Message::Text(text) => text,
            Message::Close(_) => break,
            _ => continue,
        };
        for line in text.lines() {
            for reply in session.handle_line(line) {
                if socket.send(Message::Text(reply.to_line().into())).await.is_err() {
                    return;
                }
            }
        }
    }
    tracing::debug!(events = session.events().len(), "session closed");
}

/// Binds `addr` and serves until the task is dropped.
pub async fn serve(engine: Engine, presets: PresetTable, addr: SocketAddr) -> std::io::Result<()> {
    let listener = TcpListener::bind(addr).await?;
    tracing::info!(addr = %listener.local_addr()?, "serving");
    serve_on(listener, engine, presets).await
}

pub async fn serve_on(listener: TcpListener, engine: Engine, presets: PresetTable) -> std::io::Result<()> {
    axum::serve(listener, router(engine, presets)).await
}
