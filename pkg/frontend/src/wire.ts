/**
 * Minimal XML-RPC wire codec for the coordinator's value subset:
 * int, double, string, boolean, array, struct.
 *
 * Encoding is explicit about numeric types (JS has one number type, the
 * wire has two), so outgoing params are built through the xint/xdouble/
 * xstring helpers. Decoding maps wire values back to plain JS values and
 * throws WireFault for <fault> responses.
 */

export type WireParam =
  | { t: "int"; v: number }
  | { t: "double"; v: number }
  | { t: "string"; v: string }
  | { t: "boolean"; v: boolean }
  | { t: "array"; v: WireParam[] }
  | { t: "struct"; v: Record<string, WireParam> };

export type WireValue =
  | number
  | string
  | boolean
  | WireValue[]
  | { [key: string]: WireValue };

export const xint = (v: number): WireParam => ({ t: "int", v });
export const xdouble = (v: number): WireParam => ({ t: "double", v });
export const xstring = (v: string): WireParam => ({ t: "string", v });

export class WireFault extends Error {
  constructor(public readonly code: number, message: string) {
    super(message);
    this.name = "WireFault";
  }
}

export class WireFormatError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "WireFormatError";
  }
}

const INT32_MIN = -2147483648;
const INT32_MAX = 2147483647;

function escapeXml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function unescapeXml(text: string): string {
  return text.replace(/&(amp|lt|gt|quot|apos|#\d+|#x[0-9a-fA-F]+);/g, (_, entity: string) => {
    switch (entity) {
      case "amp": return "&";
      case "lt": return "<";
      case "gt": return ">";
      case "quot": return '"';
      case "apos": return "'";
    }
    const code = entity.startsWith("#x")
      ? parseInt(entity.slice(2), 16)
      : parseInt(entity.slice(1), 10);
    return String.fromCodePoint(code);
  });
}

function encodeValue(param: WireParam): string {
  switch (param.t) {
    case "boolean":
      return `<value><boolean>${param.v ? 1 : 0}</boolean></value>`;
    case "int":
      if (!Number.isInteger(param.v) || param.v < INT32_MIN || param.v > INT32_MAX) {
        throw new WireFormatError(`int out of 32-bit range: ${param.v}`);
      }
      return `<value><int>${param.v}</int></value>`;
    case "double":
      if (!Number.isFinite(param.v)) {
        throw new WireFormatError(`non-finite double: ${param.v}`);
      }
      return `<value><double>${String(param.v)}</double></value>`;
    case "string":
      return `<value><string>${escapeXml(param.v)}</string></value>`;
    case "array":
      return `<value><array><data>${param.v.map(encodeValue).join("")}</data></array></value>`;
    case "struct": {
      const members = Object.entries(param.v)
        .map(([k, v]) => `<member><name>${escapeXml(k)}</name>${encodeValue(v)}</member>`)
        .join("");
      return `<value><struct>${members}</struct></value>`;
    }
  }
}

export function encodeCall(method: string, params: WireParam[]): string {
  const body = params.map((p) => `<param>${encodeValue(p)}</param>`).join("");
  return (
    '<?xml version="1.0"?>\n' +
    `<methodCall><methodName>${escapeXml(method)}</methodName>` +
    `<params>${body}</params></methodCall>`
  );
}

/** Cursor over the response document; tags only, no attributes needed. */
class Scanner {
  pos = 0;
  constructor(private readonly text: string) {}

  skipWhitespace(): void {
    while (this.pos < this.text.length && /\s/.test(this.text[this.pos])) this.pos++;
  }

  peekTag(): string | null {
    this.skipWhitespace();
    const match = /^<\/?([a-zA-Z][\w.]*)\/?>/.exec(this.text.slice(this.pos));
    return match ? match[1] : null;
  }

  tryOpen(tag: string): boolean {
    this.skipWhitespace();
    if (this.text.startsWith(`<${tag}>`, this.pos)) {
      this.pos += tag.length + 2;
      return true;
    }
    return false;
  }

  expectOpen(tag: string): void {
    if (!this.tryOpen(tag)) {
      throw new WireFormatError(`expected <${tag}> at offset ${this.pos}`);
    }
  }

  expectClose(tag: string): void {
    this.skipWhitespace();
    if (!this.text.startsWith(`</${tag}>`, this.pos)) {
      throw new WireFormatError(`expected </${tag}> at offset ${this.pos}`);
    }
    this.pos += tag.length + 3;
  }

  /** Raw text up to the next '<'. */
  textContent(): string {
    const end = this.text.indexOf("<", this.pos);
    if (end < 0) throw new WireFormatError("unterminated text content");
    const raw = this.text.slice(this.pos, end);
    this.pos = end;
    return unescapeXml(raw);
  }
}

function decodeScalar(scanner: Scanner, tag: string): WireValue {
  const text = scanner.textContent();
  switch (tag) {
    case "int":
    case "i4": {
      if (!/^[+-]?\d+$/.test(text.trim())) {
        throw new WireFormatError(`invalid int literal ${text}`);
      }
      return parseInt(text.trim(), 10);
    }
    case "double": {
      const value = Number(text.trim());
      if (!Number.isFinite(value) || text.trim() === "") {
        throw new WireFormatError(`invalid double literal ${text}`);
      }
      return value;
    }
    case "boolean": {
      const literal = text.trim();
      if (literal !== "0" && literal !== "1") {
        throw new WireFormatError(`invalid boolean literal ${text}`);
      }
      return literal === "1";
    }
    case "string":
      return text;
    default:
      throw new WireFormatError(`unsupported wire type <${tag}>`);
  }
}

function decodeValue(scanner: Scanner): WireValue {
  scanner.expectOpen("value");
  const tag = scanner.peekTag();
  if (tag === null || tag === "value") {
    // untagged content is a string
    const text = scanner.textContent();
    scanner.expectClose("value");
    return text;
  }
  let result: WireValue;
  if (tag === "array") {
    scanner.expectOpen("array");
    scanner.expectOpen("data");
    const items: WireValue[] = [];
    while (scanner.peekTag() === "value") items.push(decodeValue(scanner));
    scanner.expectClose("data");
    scanner.expectClose("array");
    result = items;
  } else if (tag === "struct") {
    scanner.expectOpen("struct");
    const record: { [key: string]: WireValue } = {};
    while (scanner.tryOpen("member")) {
      scanner.expectOpen("name");
      const name = scanner.textContent();
      scanner.expectClose("name");
      record[name] = decodeValue(scanner);
      scanner.expectClose("member");
    }
    scanner.expectClose("struct");
    result = record;
  } else {
    scanner.expectOpen(tag);
    // empty scalar closes immediately (e.g. <string></string>)
    result = decodeScalar(scanner, tag);
    scanner.expectClose(tag);
  }
  scanner.expectClose("value");
  return result;
}

/**
 * Decode a methodResponse document: returns the result value, or throws
 * WireFault for fault responses and WireFormatError for malformed ones.
 */
export function decodeResponse(xml: string): WireValue {
  const stripped = xml.replace(/^\s*<\?xml[^>]*\?>/, "");
  const scanner = new Scanner(stripped);
  scanner.expectOpen("methodResponse");
  if (scanner.tryOpen("fault")) {
    const payload = decodeValue(scanner);
    scanner.expectClose("fault");
    scanner.expectClose("methodResponse");
    if (
      typeof payload !== "object" || payload === null || Array.isArray(payload) ||
      typeof payload.faultCode !== "number" || typeof payload.faultString !== "string"
    ) {
      throw new WireFormatError("malformed fault payload");
    }
    throw new WireFault(payload.faultCode, payload.faultString);
  }
  scanner.expectOpen("params");
  scanner.expectOpen("param");
  const value = decodeValue(scanner);
  scanner.expectClose("param");
  scanner.expectClose("params");
  scanner.expectClose("methodResponse");
  return value;
}
