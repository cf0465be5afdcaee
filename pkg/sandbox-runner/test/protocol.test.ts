import { spawn, ChildProcessWithoutNullStreams } from "node:child_process";
import { createInterface } from "node:readline";
import path from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { extractPayload, parseRequest, PayloadExtractionError, RESULT_DELIMITER } from "../src/protocol.js";

describe("extractPayload", () => {
  it("parses the single-line payload after the delimiter", () => {
    const payload = extractPayload(`noise\n${RESULT_DELIMITER}\n{"a": 1}\n`);
    expect(payload).toEqual({ a: 1 });
  });

  it("missing delimiter", () => {
    expect(() => extractPayload("just text")).toThrowError(PayloadExtractionError);
    try {
      extractPayload("just text");
    } catch (err) {
      expect((err as PayloadExtractionError).kind).toBe("payload_missing");
    }
  });

  it("delimiter with nothing after it", () => {
    try {
      extractPayload(`${RESULT_DELIMITER}\n\n`);
      expect.unreachable();
    } catch (err) {
      expect((err as PayloadExtractionError).kind).toBe("payload_missing");
    }
  });

  it("non-object payload is malformed", () => {
    try {
      extractPayload(`${RESULT_DELIMITER}\n42\n`);
      expect.unreachable();
    } catch (err) {
      expect((err as PayloadExtractionError).kind).toBe("payload_malformed");
    }
  });
});

describe("parseRequest", () => {
  it("accepts execute and health", () => {
    expect(parseRequest('{"id": "1", "op": "health"}')).toEqual({ id: "1", op: "health" });
    expect(parseRequest('{"id": "2", "op": "execute", "script": "x", "timeout_s": 5}')).toEqual({
      id: "2",
      op: "execute",
      script: "x",
      timeout_s: 5,
    });
  });

  it("rejects junk", () => {
    expect(() => parseRequest("nope")).toThrow(/not valid JSON/);
    expect(() => parseRequest('{"op": "health"}')).toThrow(/id/);
    expect(() => parseRequest('{"id": "1", "op": "dance"}')).toThrow(/unknown op/);
    expect(() => parseRequest('{"id": "1", "op": "execute"}')).toThrow(/script/);
    expect(() => parseRequest('{"id": "1", "op": "execute", "script": "x", "timeout_s": -1}')).toThrow(
      /timeout_s/,
    );
  });
});

describe("runner process round trip", () => {
  const here = path.dirname(fileURLToPath(import.meta.url));
  const runnerJs = path.join(here, "..", "dist", "runner.js");
  let child: ChildProcessWithoutNullStreams;
  let responses: Map<string, unknown>;
  let waiters: Map<string, (value: unknown) => void>;

  function request(message: Record<string, unknown>): Promise<any> {
    const id = message.id as string;
    const promise = new Promise<unknown>((resolve) => waiters.set(id, resolve));
    child.stdin.write(JSON.stringify(message) + "\n");
    return promise as Promise<any>;
  }

  function sendRaw(line: string): void {
    child.stdin.write(line + "\n");
  }

  beforeAll(() => {
    responses = new Map();
    waiters = new Map();
    child = spawn("node", [runnerJs, "--max-concurrent", "2"], {
      stdio: ["pipe", "pipe", "pipe"],
    });
    const rl = createInterface({ input: child.stdout });
    rl.on("line", (line) => {
      const message = JSON.parse(line);
      const waiter = waiters.get(message.id);
      if (waiter) {
        waiters.delete(message.id);
        waiter(message);
      } else {
        responses.set(message.id, message);
      }
    });
  });

  afterAll(() => {
    child.stdin.end();
    child.kill();
  });

  it("health probe reports version and runtime availability", async () => {
    const reply = await request({ id: "h1", op: "health" });
    expect(reply.status).toBe("ok");
    expect(reply.health.version).toBeTruthy();
    expect(reply.health.python).toContain("Python");
    expect(typeof reply.health.opensees_available).toBe("boolean");
    expect(reply.health.max_concurrent).toBe(2);
  }, 20000);

  it("execute round trip preserves script bytes and payload", async () => {
    const script = 'import json\nprint("===RESULT===")\nprint(json.dumps({"echo": "\\u00e9\\n special"}))\n';
    const reply = await request({ id: "e1", op: "execute", script, timeout_s: 20 });
    expect(reply.status).toBe("ok");
    expect(reply.payload).toEqual({ echo: "é\n special" });
  }, 30000);

  it("malformed request yields an error response and the loop continues", async () => {
    sendRaw("this is not json");
    const reply = await request({ id: "h2", op: "health" });
    expect(reply.status).toBe("ok"); // still alive
  }, 20000);

  it("unknown op echoes the id with an error", async () => {
    const reply = await request({ id: "bad1", op: "teleport" });
    expect(reply.status).toBe("error");
    expect(reply.error).toContain("unknown op");
  }, 20000);

  it("runs parallel jobs to completion", async () => {
    const script = (tag: string) =>
      `import json, time\ntime.sleep(0.3)\nprint("===RESULT===")\nprint(json.dumps({"tag": "${tag}"}))\n`;
    const [a, b] = await Promise.all([
      request({ id: "p1", op: "execute", script: script("one"), timeout_s: 20 }),
      request({ id: "p2", op: "execute", script: script("two"), timeout_s: 20 }),
    ]);
    expect(a.payload.tag).toBe("one");
    expect(b.payload.tag).toBe("two");
  }, 30000);
});
