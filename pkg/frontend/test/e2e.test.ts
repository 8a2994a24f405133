// End-to-end: the real UI in a jsdom window against a live quiverlab
// service spawned for the test.  Assertions are on the rendered DOM,
// and expression strings are compared verbatim with the API responses.

import assert from "node:assert/strict";
import { spawn, type ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import { createServer } from "node:net";
import { dirname, join } from "node:path";
import { after, before, test } from "node:test";
import { fileURLToPath } from "node:url";

import { JSDOM } from "jsdom";

import { initApp, wireControls, type App } from "../src/main.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const INDEX_HTML = readFileSync(join(HERE, "..", "..", "index.html"), "utf-8");

let service: ChildProcess;
let base: string;
let dom: JSDOM;
let app: App;

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const srv = createServer();
    srv.listen(0, "127.0.0.1", () => {
      const address = srv.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port assigned"));
        return;
      }
      const port = address.port;
      srv.close(() => resolve(port));
    });
  });
}

async function waitForService(url: string, timeoutMs = 15000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${url}/api/sessions/probe`);
      if (resp.status === 404) return; // service answers with its envelope
    } catch {
      /* not up yet */
    }
    await new Promise((r) => setTimeout(r, 100));
  }
  throw new Error("service did not come up in time");
}

async function waitFor<T>(
  probe: () => T | null | undefined | false,
  what: string,
  timeoutMs = 10000,
): Promise<T> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    const got = probe();
    if (got) return got;
    if (Date.now() > deadline) throw new Error(`timed out waiting for ${what}`);
    await new Promise((r) => setTimeout(r, 25));
  }
}

function click(el: Element): void {
  el.dispatchEvent(new dom.window.MouseEvent("click", { bubbles: true }));
}

function doc(): Document {
  return dom.window.document;
}

before(async () => {
  const port = await freePort();
  base = `http://127.0.0.1:${port}`;
  service = spawn("python3", ["-m", "quiverlab", "serve", "--port", String(port)], {
    stdio: "ignore",
  });
  await waitForService(base);
  dom = new JSDOM(INDEX_HTML, { url: base });
  app = initApp(dom.window.document, base);
  wireControls(dom.window.document, app);
});

after(() => {
  service?.kill();
});

test("create a tournament session and mutate by clicking vertex 1", async () => {
  click(doc().querySelector('[data-preset="triangle QT"]')!);
  await waitFor(
    () => doc().querySelector('[data-variable="1"]'),
    "initial variable panel",
  );
  assert.equal(doc().querySelector('[data-variable="1"]')!.textContent, "x1");

  const vertex = await waitFor(
    () => doc().querySelector('[data-vertex="1"]'),
    "rendered vertex 1",
  );
  click(vertex);
  await waitFor(
    () => doc().querySelector('[data-variable="1"]')!.textContent !== "x1",
    "mutated variable",
  );

  const shown = doc().querySelector('[data-variable="1"]')!.textContent;
  assert.equal(shown, "(x2*x3 + 1)/(x1)");

  // verbatim: the panel text equals the API's rendering, byte for byte
  const sid = app.state.session!.id;
  const fromApi = (await (await fetch(`${base}/api/sessions/${sid}`)).json()) as {
    cluster: Record<string, string>;
  };
  assert.equal(shown, fromApi.cluster["1"]);

  // the drawing reflects the mutated quiver: arrows at 1 are reversed
  const state = app.state.session!;
  const at1 = state.quiver.arrows.filter((a) => a.source === "1" || a.target === "1");
  assert.ok(at1.every((a) => a.target === "1"));
  const history = doc().querySelector(".history")!;
  assert.match(history.textContent ?? "", /mutate at 1/);
});

test("undo restores the initial variable", async () => {
  click(doc().getElementById("undo-button")!);
  await waitFor(
    () => doc().querySelector('[data-variable="1"]')!.textContent === "x1",
    "undo to x1",
  );
  assert.equal(doc().querySelector('[data-variable="1"]')!.textContent, "x1");
  assert.equal(doc().querySelector(".history ol, .history li"), null);
});

test("opposite-equivalence badge reads equivalent", async () => {
  click(doc().getElementById("op-check-button")!);
  const badge = await waitFor(
    () => doc().querySelector("[data-op-badge]"),
    "op badge",
  );
  assert.match(badge.textContent ?? "", /^equivalent/);
});

test("clicking twice on one vertex returns to the original drawing", async () => {
  const before_ = app.state.session!.quiver.arrows
    .map((a) => `${a.source}>${a.target}`)
    .sort()
    .join(",");
  click(doc().querySelector('[data-vertex="2"]')!);
  await app.idle();
  click(doc().querySelector('[data-vertex="2"]')!);
  await waitFor(
    () =>
      app.state.session!.quiver.arrows
        .map((a) => `${a.source}>${a.target}`)
        .sort()
        .join(",") === before_ && !app.state.busy,
    "involution returns the drawing",
  );
  click(doc().getElementById("undo-button")!);
  await app.idle();
  click(doc().getElementById("undo-button")!);
  await app.idle();
});

test("unknown vertex mutation surfaces an inline error and keeps state", async () => {
  const snapshot = app.state.session!;
  await app.mutate("9");
  const err = await waitFor(() => doc().querySelector("[data-error]"), "error panel");
  assert.match(err.textContent ?? "", /no vertex/);
  assert.equal(app.state.session, snapshot);
});

test("A3 embedding panel shows layers mirrored across y=0", async () => {
  click(doc().querySelector('[data-preset="path A3"]')!);
  // the sigma row with depth 2 exists only for A3; panels redraw
  // together, so once it shows, every panel reflects the A3 session
  await waitFor(() => {
    const row = doc().querySelector('[data-sigma-vertex="1"]');
    return row && /\(-2, 1\)/.test(row.textContent ?? "") ? row : null;
  }, "A3 panels");
  const planes = Array.from(
    doc().querySelectorAll(".embedding-canvas circle[data-plane-y]"),
  ).map((c) => Number(c.getAttribute("data-plane-y")));
  for (const y of [0, 1, 2]) {
    assert.ok(planes.includes(y), `plane y=${y} populated`);
    assert.ok(planes.includes(-y), `plane y=${-y} populated`);
  }
  const zeroSlice = [0, 1, 2].filter((y) => planes.includes(y));
  const mirrored = zeroSlice.filter((y) => planes.includes(-y));
  assert.equal(mirrored.length, zeroSlice.length);
  assert.ok(doc().querySelector('.embedding-canvas [data-plane="y0"]'));
});

test("hovering a point highlights its anti-automorphism partner", async () => {
  const point = await waitFor(
    () => doc().querySelector('.embedding-canvas circle[data-point="0:2"]'),
    "embedded point (0,2)",
  );
  assert.equal(point.getAttribute("data-mirror"), "-1:2");
  point.dispatchEvent(new dom.window.MouseEvent("mouseenter"));
  const twin = doc().querySelector('.embedding-canvas circle[data-point="-1:2"]');
  assert.equal(twin?.getAttribute("data-highlight"), "true");
  point.dispatchEvent(new dom.window.MouseEvent("mouseleave"));
  assert.equal(twin?.getAttribute("data-highlight"), null);
});

test("sigma table lists the closed-form rule", () => {
  const rows = Array.from(doc().querySelectorAll("[data-sigma-vertex]"));
  assert.equal(rows.length, 3);
  assert.match(
    doc().querySelector('[data-sigma-vertex="1"]')!.textContent ?? "",
    /\(-2, 1\)/,
  );
  assert.match(
    doc().querySelector('[data-sigma-vertex="2"]')!.textContent ?? "",
    /\(-1, 2\)/,
  );
});
