"""Command-language line parser.

One input line can hold several commands separated by semicolons; `%`
starts a comment (outside double quotes); `#N cmd` repeats a command N
times; `< file` includes a script; `name = value` assigns a parameter;
`cmd > file` redirects the command's text output to a file.

parse_line is total: malformed pieces come back as error invocations
instead of raising, so callers surface them as complaints.
"""

import re
from dataclasses import dataclass, field


@dataclass
class Invocation:
    kind: str                   # command | assign | include | error
    tokens: list = field(default_factory=list)
    name: str = ""              # assign
    value: str = ""             # assign
    path: str = ""              # include
    redirect: str | None = None
    raw: str = ""
    message: str = ""           # error
    column: int = 0             # error


_ASSIGN = re.compile(r"^\s*([A-Za-z][A-Za-z0-9_\-]*)\s*=\s*(.*?)\s*$")


def _strip_comment(text):
    in_quote = False
    for i, ch in enumerate(text):
        if ch == '"':
            in_quote = not in_quote
        elif ch == "%" and not in_quote:
            return text[:i]
    return text


def _split_semicolons(text):
    pieces = []
    start = 0
    in_quote = False
    for i, ch in enumerate(text):
        if ch == '"':
            in_quote = not in_quote
        elif ch == ";" and not in_quote:
            pieces.append((start, text[start:i]))
            start = i + 1
    pieces.append((start, text[start:]))
    return pieces


def tokenize(text, offset=0):
    """Split on whitespace, keeping double-quoted runs as one token.

    Returns (tokens, error_or_None); the error carries the column of an
    unterminated quote.
    """
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == '"':
            j = text.find('"', i + 1)
            if j < 0:
                return tokens, ("unterminated quote", offset + i)
            tokens.append(text[i + 1:j])
            i = j + 1
            continue
        j = i
        while j < n and not text[j].isspace() and text[j] != '"':
            j += 1
        tokens.append(text[i:j])
        i = j
    return tokens, None


def parse_line(text):
    """Parse one line into a list of invocations (errors are values)."""
    if not isinstance(text, str):
        try:
            text = bytes(text).decode("utf-8", errors="replace")
        except Exception:
            return [Invocation(kind="error", raw=repr(text),
                               message="undecodable input", column=0)]
    out = []
    body = _strip_comment(text)
    for col0, piece in _split_semicolons(body):
        stripped = piece.strip()
        if not stripped:
            continue
        raw = stripped
        # repetition prefix
        repeat = 1
        m = re.match(r"^#(\d+)\s+(.*)$", stripped)
        if m:
            repeat = int(m.group(1))
            stripped = m.group(2).strip()
            raw = stripped
            if not stripped:
                out.append(Invocation(kind="error", raw=raw,
                                      message="nothing to repeat",
                                      column=col0))
                continue
        elif stripped.startswith("#"):
            out.append(Invocation(kind="error", raw=raw,
                                  message="bad repeat prefix (use #N cmd)",
                                  column=col0))
            continue
        # script include
        if stripped.startswith("<"):
            path = stripped[1:].strip()
            if not path:
                out.append(Invocation(kind="error", raw=raw,
                                      message="missing script name",
                                      column=col0))
                continue
            out.extend(Invocation(kind="include", path=path, raw=raw)
                       for _ in range(repeat))
            continue
        # parameter assignment
        m = _ASSIGN.match(stripped)
        if m and '"' not in m.group(1):
            inv = Invocation(kind="assign", name=m.group(1),
                             value=m.group(2), raw=raw)
            out.extend([inv] * repeat)
            continue
        # output redirect (last > outside quotes)
        redirect = None
        in_quote = False
        gt = -1
        for i, ch in enumerate(stripped):
            if ch == '"':
                in_quote = not in_quote
            elif ch == ">" and not in_quote:
                gt = i
        if gt >= 0:
            target = stripped[gt + 1:].strip()
            if not target:
                out.append(Invocation(kind="error", raw=raw,
                                      message="missing redirect target",
                                      column=col0 + gt))
                continue
            redirect = target
            stripped = stripped[:gt].strip()
        tokens, err = tokenize(stripped, col0)
        if err is not None:
            out.append(Invocation(kind="error", raw=raw, message=err[0],
                                  column=err[1]))
            continue
        if not tokens:
            continue
        inv = Invocation(kind="command", tokens=tokens, redirect=redirect,
                         raw=raw)
        out.extend([inv] * repeat)
    return out
