"""Minimal positioned XML reader.

Built directly on expat so every element records its source line/column,
which ElementTree does not expose.  DOCTYPE declarations are accepted and
skipped; external entities are never fetched.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from xml.parsers import expat
from xml.parsers.expat import errors as _xml_errors


class XmlSyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass
class XmlNode:
    tag: str
    attrs: dict[str, str]
    line: int
    col: int
    children: list["XmlNode"] = field(default_factory=list)
    text_parts: list[str] = field(default_factory=list)

    @property
    def text(self) -> str:
        """Concatenated character data directly inside this element."""
        return "".join(self.text_parts)


# expat error codes that mean the document stopped short
_EOF_CODES = {
    _xml_errors.codes[_xml_errors.XML_ERROR_NO_ELEMENTS],
    _xml_errors.codes[_xml_errors.XML_ERROR_UNCLOSED_TOKEN],
    _xml_errors.codes[_xml_errors.XML_ERROR_UNCLOSED_CDATA_SECTION],
    _xml_errors.codes[_xml_errors.XML_ERROR_PARTIAL_CHAR],
}


def read_xml(data: bytes | str) -> XmlNode:
    """Parse XML bytes/text into an XmlNode tree.  Raises XmlSyntaxError."""
    if isinstance(data, str):
        data = data.encode("utf-8")

    parser = expat.ParserCreate()
    root: list[XmlNode] = []
    stack: list[XmlNode] = []

    def start(tag: str, attrs: dict[str, str]) -> None:
        node = XmlNode(
            tag, attrs, parser.CurrentLineNumber, parser.CurrentColumnNumber + 1
        )
        if stack:
            stack[-1].children.append(node)
        else:
            root.append(node)
        stack.append(node)

    def end(tag: str) -> None:
        stack.pop()

    def chars(text: str) -> None:
        if stack:
            stack[-1].text_parts.append(text)

    parser.StartElementHandler = start
    parser.EndElementHandler = end
    parser.CharacterDataHandler = chars
    # entity definitions inside an inline DTD stay unexpanded and unfetched
    parser.SetParamEntityParsing(expat.XML_PARAM_ENTITY_PARSING_NEVER)

    try:
        parser.Parse(data, True)
    except expat.ExpatError as exc:
        message = _xml_errors.messages.get(exc.code, "malformed XML")
        if exc.code in _EOF_CODES:
            message = f"unexpected end of input ({message})"
        raise XmlSyntaxError(message, exc.lineno, exc.offset + 1) from None

    if not root:
        raise XmlSyntaxError("unexpected end of input (no element found)", 1, 1)
    return root[0]
