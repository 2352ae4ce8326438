"""Pure state machines for the register and reliable-broadcast protocols."""

from .broadcast import BroadcastState, RBroadcast, Tick, evaluate_quorum_guard, initial_broadcast_state, rb_step
from .messages import (
    ACK,
    ANY,
    ECHO,
    READ,
    READY,
    SEND,
    STAR,
    VALUE,
    WRITE,
    Deliver,
    Gossip,
    GossipTo,
    MalformedMessage,
    Message,
    ReadReturn,
    WriteReturn,
)
from .register import Read, RegisterState, Write, highestval, initial_register_state, reg_step
from .signatures import GENESIS, MockSignatureScheme, SignatureScheme, write_payload

__all__ = [
    "ACK", "ANY", "ECHO", "GENESIS", "READ", "READY", "SEND", "STAR", "VALUE", "WRITE",
    "BroadcastState", "Deliver", "Gossip", "GossipTo", "MalformedMessage", "Message",
    "MockSignatureScheme", "RBroadcast", "Read", "ReadReturn", "RegisterState", "SignatureScheme",
    "Tick", "Write", "WriteReturn", "evaluate_quorum_guard", "highestval", "initial_broadcast_state",
    "initial_register_state", "rb_step", "reg_step", "write_payload",
]
