#!/usr/bin/env python3
"""Regenerate corpus/bench: 50 deterministic MiniJava-CF files, each under
100 lines, mixing clean code, lifecycle misuses, weak parameters, aliasing,
branches, loops, and suppression annotations.

Run from the repository root: python scripts/gen_bench_corpus.py
"""

from __future__ import annotations

import random
from pathlib import Path

OUT_DIR = Path(__file__).resolve().parent.parent / "corpus" / "bench"
FILE_COUNT = 50


def method_clean_encryptor(i: int) -> str:
    return f"""void sealRecord{i}(byte[] data, CipherParameters key) {{
    ECElGamalEncryptor enc = new ECElGamalEncryptor();
    enc.init(key);
    byte[] out = enc.encrypt(data);
}}"""


def method_missing_init(i: int) -> str:
    return f"""void sealRecordFast{i}(byte[] data) {{
    ECElGamalEncryptor enc = new ECElGamalEncryptor();
    byte[] out = enc.encrypt(data);
}}"""


def method_never_used(i: int) -> str:
    return f"""void prepareEncryptor{i}() {{
    ECElGamalEncryptor enc = new ECElGamalEncryptor();
}}"""


def method_branchy(i: int) -> str:
    return f"""void sealMaybe{i}(byte[] data, CipherParameters key, boolean ready) {{
    ECElGamalEncryptor enc = new ECElGamalEncryptor();
    if (ready) {{
        enc.init(key);
    }}
    byte[] out = enc.encrypt(data);
}}"""


def method_both_branches(i: int) -> str:
    return f"""void sealEither{i}(byte[] data, CipherParameters a, CipherParameters b, boolean primary) {{
    ECElGamalEncryptor enc = new ECElGamalEncryptor();
    if (primary) {{
        enc.init(a);
    }} else {{
        enc.init(b);
    }}
    byte[] out = enc.encrypt(data);
}}"""


def method_loop(i: int) -> str:
    return f"""void sealStream{i}(byte[] data, CipherParameters key, boolean more) {{
    ECElGamalEncryptor enc = new ECElGamalEncryptor();
    enc.init(key);
    while (more) {{
        byte[] out = enc.encrypt(data);
    }}
}}"""


def method_alias(i: int) -> str:
    return f"""void sealViaAlias{i}(byte[] data, CipherParameters key) {{
    ECElGamalEncryptor original = new ECElGamalEncryptor();
    ECElGamalEncryptor handle = original;
    handle.init(key);
    byte[] out = original.encrypt(data);
}}"""


def method_weak_key(i: int, bits: int) -> str:
    return f"""void mintKeys{i}() {{
    KeyPairGenerator gen = new KeyPairGenerator();
    gen.init({bits});
    KeyPair pair = gen.generateKeyPair();
}}"""


def method_unresolved_key(i: int) -> str:
    return f"""void mintKeysConfigured{i}(int requestedBits) {{
    KeyPairGenerator gen = new KeyPairGenerator();
    gen.init(requestedBits);
    KeyPair pair = gen.generateKeyPair();
}}"""


def method_cipher(i: int, name: str) -> str:
    return f"""void transformChunk{i}(byte[] chunk) {{
    StreamCipherFactory factory = new StreamCipherFactory("{name}");
    byte[] out = factory.process(chunk);
}}"""


def method_suppressed(i: int) -> str:
    return f"""void replayCapture{i}(byte[] sample) {{
    ECElGamalEncryptor enc = new ECElGamalEncryptor();
    byte[] out = enc.encrypt(sample); // cm:allow bc-ec-elgamal-encryptor
}}"""


def method_untracked(i: int) -> str:
    return f"""void shuffleBuffers{i}(byte[] left, byte[] right) {{
    int count = 3;
    byte[] tmp = left;
    left = right;
    right = tmp;
}}"""


def method_returns(i: int) -> str:
    return f"""void sealOrBail{i}(byte[] data, CipherParameters key, boolean abort) {{
    ECElGamalEncryptor enc = new ECElGamalEncryptor();
    if (abort) {{
        return;
    }}
    enc.init(key);
    byte[] out = enc.encrypt(data);
}}"""


TEMPLATES = [
    method_clean_encryptor,
    method_missing_init,
    method_never_used,
    method_branchy,
    method_both_branches,
    method_loop,
    method_alias,
    lambda i: method_weak_key(i, 1024),
    lambda i: method_weak_key(i, 4096),
    method_unresolved_key,
    lambda i: method_cipher(i, "RC4"),
    lambda i: method_cipher(i, "DES"),
    lambda i: method_cipher(i, "ChaCha20"),
    method_suppressed,
    method_untracked,
    method_returns,
]


def main() -> None:
    rng = random.Random(20240831)
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    for old in OUT_DIR.glob("bench_*.mj"):
        old.unlink()
    for index in range(FILE_COUNT):
        n_methods = rng.randint(2, 6)
        parts = [f"// Bench sample {index:03d}: generated, do not hand-edit."]
        for m in range(n_methods):
            template = rng.choice(TEMPLATES)
            parts.append(template(index * 10 + m))
        text = "\n\n".join(parts) + "\n"
        assert text.count("\n") <= 100, f"bench_{index:03d} too long"
        (OUT_DIR / f"bench_{index:03d}.mj").write_text(text, encoding="utf-8")
    print(f"wrote {FILE_COUNT} files to {OUT_DIR}")


if __name__ == "__main__":
    main()
