"""Byte-exact wire transcript of the canonical editing session.

The scripted client drives: initialize -> didOpen -> (publish) ->
codeAction -> executeCommand -> (republish) -> shutdown -> exit, in
lockstep. Every byte the server writes, framing included, must match the
checked-in golden file. The sample document deliberately contains non-ASCII
identifiers so Content-Length values prove they count bytes, not
characters.

Regenerate after an intended wire change with:
    CRYPTOMATE_UPDATE_GOLDEN=1 pytest tests/test_server_golden.py
then review the diff.
"""

from __future__ import annotations

import os
from pathlib import Path

from _support import LspClient

GOLDEN = Path(__file__).parent / "golden" / "session_expected.bin"

SAMPLE_URI = "file:///workspace/sample.mj"
SAMPLE_TEXT = (
    "// touché: the café encryptor skips init\n"
    "void shipOrder(byte[] caféData) {\n"
    "    ECElGamalEncryptor café = new ECElGamalEncryptor();\n"
    "    byte[] out = café.encrypt(caféData);\n"
    "}\n"
)


def canonical_session(tmp_path) -> bytes:
    client = LspClient("--feedback-store", str(tmp_path / "feedback.json"))
    try:
        client.initialize(root_uri="file:///workspace")
        client.send(
            "textDocument/didOpen",
            {
                "textDocument": {
                    "uri": SAMPLE_URI,
                    "languageId": "minijava-cf",
                    "version": 1,
                    "text": SAMPLE_TEXT,
                }
            },
        )
        publish = client.wait_for_publish(SAMPLE_URI)
        (diagnostic,) = publish["diagnostics"]

        response = client.request(
            "textDocument/codeAction",
            {
                "textDocument": {"uri": SAMPLE_URI},
                "range": diagnostic["range"],
                "context": {"diagnostics": [diagnostic]},
            },
        )
        assert [a["title"] for a in response["result"]][1:] == [
            "Suppress with annotation",
            "Mark as false positive",
            "Mark as true positive",
        ]

        data = diagnostic["data"]
        client.send(
            "workspace/executeCommand",
            {
                "command": "cryptomate.feedback",
                "arguments": [data["fingerprint"], "fp", data["rule_id"], data["strategy"]],
            },
            request=True,
        )
        client.wait_for_publish(SAMPLE_URI)
        client.read_until(lambda m: "id" in m and "method" not in m)

        client.request("shutdown", None)
        client.send("exit", None)
        assert client.close(clean=False) == 0
        return bytes(client.received)
    finally:
        client.close(clean=False)


def test_canonical_session_transcript(tmp_path):
    transcript = canonical_session(tmp_path)
    if os.environ.get("CRYPTOMATE_UPDATE_GOLDEN"):
        GOLDEN.parent.mkdir(parents=True, exist_ok=True)
        GOLDEN.write_bytes(transcript)
    assert GOLDEN.exists(), "golden transcript missing; regenerate and review"
    assert transcript == GOLDEN.read_bytes()


def test_transcript_content_lengths_count_bytes(tmp_path):
    transcript = canonical_session(tmp_path)
    offset = 0
    frames = 0
    saw_multibyte = False
    while offset < len(transcript):
        header_end = transcript.index(b"\r\n\r\n", offset) + 4
        header = transcript[offset:header_end]
        length = int(header.split(b"Content-Length:")[1].split(b"\r\n")[0])
        payload = transcript[header_end : header_end + length]
        assert len(payload) == length
        decoded = payload.decode("utf-8")
        if len(decoded) != length:
            saw_multibyte = True
        offset = header_end + length
        frames += 1
    assert frames >= 6
    assert saw_multibyte, "the canonical session must exercise multibyte payloads"
