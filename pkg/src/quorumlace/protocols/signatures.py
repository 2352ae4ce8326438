"""Signature schemes for the register protocol."""

from __future__ import annotations

import hashlib
from typing import Optional, Protocol

GENESIS = "GENESIS"


class SignatureScheme(Protocol):
    def sign(self, signer: str, message: bytes) -> str: ...

    def verify(self, signer: str, token: str, message: bytes) -> bool: ...


def write_payload(writer: str, ts: int, value: Optional[str]) -> bytes:
    """The bytes ``write‖w‖ts‖v`` the writer signs."""
    shown = "" if value is None else value
    return f"write\x1f{writer}\x1f{ts}\x1f{len(shown)}:{shown}".encode()


class MockSignatureScheme:
    """Deterministic tokens ``signer|digest``.

    Every issued token is remembered, so a token that looks right but was
    never produced by :meth:`sign` does not verify.  The initial register
    tuple is accepted with the token ``GENESIS``.
    """

    def __init__(self) -> None:
        self._issued: set = set()

    @staticmethod
    def _token(signer: str, message: bytes) -> str:
        return f"{signer}|{hashlib.sha256(message).hexdigest()[:16]}"

    def sign(self, signer: str, message: bytes) -> str:
        token = self._token(signer, message)
        self._issued.add(token)
        return token

    def verify(self, signer: str, token: str, message: bytes) -> bool:
        if token == GENESIS:
            return message == write_payload(signer, 0, None)
        return token in self._issued and token == self._token(signer, message)
