"""Playground HTTP service: interactive pebbling sessions over a JSON API.

Sessions live in process memory.  Each session holds one game variant, one
tree, the full configuration history (for undo and peak tracking), and an
optional pinned strategy used for hints.  Illegal moves are rejected with
status 409 and a body carrying the violated rule citation; the session state
is never changed by a rejected move.

Endpoints:

* POST   /sessions                    -- create (fresh instance or imported trace)
* GET    /sessions/{sid}              -- current state
* DELETE /sessions/{sid}              -- drop the session
* POST   /sessions/{sid}/moves        -- apply a move (409 + rule citation if illegal)
* POST   /sessions/{sid}/undo         -- revert the last move
* GET    /sessions/{sid}/legal-moves  -- enumerate every legal move
* POST   /sessions/{sid}/pin-strategy -- pin a generated or supplied strategy
* GET    /sessions/{sid}/hint         -- next pinned move (409 if diverged)
* GET    /sessions/{sid}/export       -- the session as a trace document
* GET    /strategies                  -- generate a certified strategy
* GET    /optimal                     -- exact minimum peak via the oracle
"""

from __future__ import annotations

import secrets
import threading
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from fastapi import Body, FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .bounds import UnsupportedBoundError, theorem_min
from .core import PebbleConfig, TreeShape, format_rational, metrics, parse_rational
from .oracle import OracleError, ResourceCapError, optimal_peak
from .rules import (
    GameVariant,
    Move,
    Violation,
    apply_move,
    legal_moves,
    move_from_json,
    move_to_json,
    validate_move,
)
from .strategies import StrategyError, strategy_for
from .trace import Trace, TraceValidationError, trace_from_json, trace_to_json, validate_trace


@dataclass
class _Session:
    id: str
    variant: GameVariant
    shape: TreeShape
    configs: List[PebbleConfig]
    moves: List[Move]
    pinned: Optional[Trace] = None
    pinned_label: Optional[str] = None
    lock: threading.Lock = field(default_factory=threading.Lock)

    def trace(self) -> Trace:
        return Trace(self.variant, self.shape, self.configs[0], tuple(self.moves))


def _error(status: int, message: str, rule: Optional[str] = None) -> JSONResponse:
    body: Dict[str, object] = {"error": message}
    if rule is not None:
        body["rule"] = rule
    return JSONResponse(status_code=status, content=body)


def _violation_response(violation: Violation) -> JSONResponse:
    return _error(409, f"{violation.rule}: {violation.reason}", rule=violation.rule)


def _session_json(sess: _Session) -> Dict[str, object]:
    report = validate_trace(sess.trace())
    config = sess.configs[-1]
    try:
        bound = format_rational(theorem_min(sess.variant.kind, sess.shape.d, sess.shape.h))
    except UnsupportedBoundError:
        bound = None
    return {
        "id": sess.id,
        "game": sess.variant.kind,
        "granularity": format_rational(sess.variant.granularity),
        "d": sess.shape.d,
        "h": sess.shape.h,
        "moveCount": len(sess.moves),
        "config": [
            {"node": node, "b": format_rational(b), "w": format_rational(w)}
            for node, (b, w) in sorted(config.entries().items())
        ],
        "weight": format_rational(config.total_weight()),
        "peak": format_rational(report.peak),
        "bound": bound,
        "metrics": metrics(config).to_json(),
        "classifications": report.classifications(),
        "rootFullTimes": list(report.root_full_times),
        "pinned": sess.pinned is not None,
        "pinnedLabel": sess.pinned_label,
    }


def create_app() -> FastAPI:
    app = FastAPI(title="pebblekit playground", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    sessions: Dict[str, _Session] = {}
    registry_lock = threading.Lock()

    def _get(sid: str) -> Optional[_Session]:
        with registry_lock:
            return sessions.get(sid)

    # -- session lifecycle --------------------------------------------------

    @app.post("/sessions", status_code=201)
    def create_session(payload: dict = Body(default={})):
        if "trace" in payload:
            try:
                trace = trace_from_json(payload["trace"])
                validate_trace(trace)
            except TraceValidationError as exc:
                return _error(400, f"trace rejected: {exc}", rule=exc.violation.rule)
            except (KeyError, ValueError, TypeError) as exc:
                return _error(400, f"malformed trace: {exc}")
            configs = [trace.initial]
            for move in trace.moves:
                configs.append(apply_move(trace.variant, configs[-1], move))
            sess = _Session(
                id=secrets.token_urlsafe(8),
                variant=trace.variant,
                shape=trace.shape,
                configs=configs,
                moves=list(trace.moves),
            )
        else:
            try:
                game = str(payload.get("game", "black"))
                granularity = payload.get("granularity")
                variant = GameVariant.from_name(game, granularity)
                shape = TreeShape(int(payload.get("d", 2)), int(payload.get("h", 3)))
            except (KeyError, ValueError, TypeError) as exc:
                return _error(400, str(exc))
            sess = _Session(
                id=secrets.token_urlsafe(8),
                variant=variant,
                shape=shape,
                configs=[PebbleConfig(shape, {})],
                moves=[],
            )
        with registry_lock:
            sessions[sess.id] = sess
        return _session_json(sess)

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        sess = _get(sid)
        if sess is None:
            return _error(404, "unknown session")
        with sess.lock:
            return _session_json(sess)

    @app.delete("/sessions/{sid}")
    def delete_session(sid: str):
        with registry_lock:
            if sid not in sessions:
                return _error(404, "unknown session")
            del sessions[sid]
        return {"deleted": sid}

    # -- play ---------------------------------------------------------------

    @app.post("/sessions/{sid}/moves")
    def post_move(sid: str, payload: dict = Body(...)):
        sess = _get(sid)
        if sess is None:
            return _error(404, "unknown session")
        try:
            move = move_from_json(payload)
        except (KeyError, ValueError, TypeError) as exc:
            return _error(400, f"malformed move: {exc}")
        with sess.lock:
            violation = validate_move(sess.variant, sess.configs[-1], move)
            if violation is not None:
                return _violation_response(violation)
            sess.configs.append(apply_move(sess.variant, sess.configs[-1], move))
            sess.moves.append(move)
            return _session_json(sess)

    @app.post("/sessions/{sid}/undo")
    def undo(sid: str):
        sess = _get(sid)
        if sess is None:
            return _error(404, "unknown session")
        with sess.lock:
            if not sess.moves:
                return _error(409, "nothing to undo")
            sess.moves.pop()
            sess.configs.pop()
            return _session_json(sess)

    @app.get("/sessions/{sid}/legal-moves")
    def get_legal_moves(sid: str):
        sess = _get(sid)
        if sess is None:
            return _error(404, "unknown session")
        with sess.lock:
            moves = legal_moves(sess.variant, sess.configs[-1])
        return {"moves": [move_to_json(m) for m in moves], "count": len(moves)}

    # -- pinned strategies and hints ---------------------------------------

    @app.post("/sessions/{sid}/pin-strategy")
    def pin_strategy(sid: str, payload: dict = Body(default={})):
        sess = _get(sid)
        if sess is None:
            return _error(404, "unknown session")
        if "trace" in payload:
            try:
                pinned = trace_from_json(payload["trace"])
            except (KeyError, ValueError, TypeError) as exc:
                return _error(400, f"malformed trace: {exc}")
            label = "supplied"
        else:
            game = str(payload.get("game", sess.variant.kind))
            epsilon = payload.get("epsilon")
            try:
                eps = parse_rational(epsilon) if epsilon is not None else None
                generated = strategy_for(game, sess.shape.d, sess.shape.h, epsilon=eps)
            except (StrategyError, UnsupportedBoundError, ValueError) as exc:
                return _error(400, str(exc))
            pinned = generated.trace
            label = f"{generated.certificate.kind} strategy"
        if pinned.shape != sess.shape:
            return _error(
                400,
                f"strategy tree (d={pinned.shape.d}, h={pinned.shape.h}) does not match "
                f"the session tree (d={sess.shape.d}, h={sess.shape.h})",
            )
        with sess.lock:
            regridded = Trace(sess.variant, sess.shape, pinned.initial, pinned.moves)
            try:
                report = validate_trace(regridded, collect_step_metrics=False)
            except TraceValidationError as exc:
                return _error(
                    400,
                    f"strategy is not playable under this session's rules: {exc}",
                    rule=exc.violation.rule,
                )
            if pinned.initial != sess.configs[0]:
                return _error(
                    400, "strategy initial configuration does not match the session's"
                )
            sess.pinned = regridded
            sess.pinned_label = label
            return {
                "pinned": True,
                "label": label,
                "moves": len(regridded.moves),
                "peak": format_rational(report.peak),
            }

    @app.get("/sessions/{sid}/hint")
    def hint(sid: str):
        sess = _get(sid)
        if sess is None:
            return _error(404, "unknown session")
        with sess.lock:
            if sess.pinned is None:
                return _error(409, "no strategy pinned")
            played = len(sess.moves)
            pinned_moves = sess.pinned.moves
            if tuple(sess.moves) != pinned_moves[:played]:
                diverged_at = next(
                    i
                    for i, (a, b) in enumerate(zip(sess.moves, pinned_moves))
                    if a != b
                )
                return _error(
                    409,
                    f"session diverged from the pinned strategy at move {diverged_at}",
                )
            if played == len(pinned_moves):
                return {"done": True, "index": played}
            return {
                "move": move_to_json(pinned_moves[played]),
                "index": played,
                "remaining": len(pinned_moves) - played,
            }

    @app.get("/sessions/{sid}/export")
    def export(sid: str):
        sess = _get(sid)
        if sess is None:
            return _error(404, "unknown session")
        with sess.lock:
            return trace_to_json(sess.trace())

    # -- stateless computations --------------------------------------------

    @app.get("/strategies")
    def strategies_endpoint(
        game: str, d: int = 2, h: int = 3, epsilon: Optional[str] = None
    ):
        try:
            eps = parse_rational(epsilon) if epsilon is not None else None
            generated = strategy_for(game, d, h, epsilon=eps)
        except (StrategyError, UnsupportedBoundError, ValueError) as exc:
            return _error(400, str(exc))
        return {
            "trace": generated.to_json(),
            "report": generated.report.to_json(),
            "peak": format_rational(generated.peak),
            "target": format_rational(generated.certificate.target),
        }

    @app.get("/optimal")
    def optimal_endpoint(
        game: str,
        d: int = 2,
        h: int = 3,
        granularity: Optional[str] = None,
        stateCap: Optional[int] = None,
    ):
        try:
            g = parse_rational(granularity) if granularity is not None else None
            kwargs = {} if stateCap is None else {"state_cap": stateCap}
            report = optimal_peak(game, d, h, granularity=g, **kwargs)
        except ResourceCapError as exc:
            return _error(503, f"search stopped at the resource cap: {exc}")
        except (OracleError, ValueError) as exc:
            return _error(400, str(exc))
        return report.to_json(include_witness=True)

    return app


app = create_app()
