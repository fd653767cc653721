import { afterEach, describe, expect, it, vi } from "vitest";
import { readFileSync } from "node:fs";
import { join } from "node:path";

import { ApiClient } from "../src/api";
import { createAddPhraseBox } from "../src/previewBox";
import { PREVIEW_FIXTURE, flush, mockFetch } from "./helpers";

afterEach(() => vi.unstubAllGlobals());

function mount(debounceMs = 0): HTMLElement {
  const api = new ApiClient("", "tok");
  const box = createAddPhraseBox(api, "c1", () => undefined, debounceMs);
  document.body.replaceChildren(box);
  return box;
}

function type(box: HTMLElement, text: string): void {
  const input = box.querySelector(".phrase-input") as HTMLInputElement;
  input.value = text;
  input.dispatchEvent(new Event("input"));
}

describe("add-phrase live preview", () => {
  it("shows the API uncaught_count and one row per match", async () => {
    mockFetch({ "GET /preview": PREVIEW_FIXTURE });
    const box = mount();
    type(box, "ugly");
    await flush(5);
    expect(box.querySelector(".uncaught-count")!.textContent).toBe("2 uncaught comments");
    const rows = [...box.querySelectorAll(".preview-row")];
    expect(rows).toHaveLength(3);
    expect(rows.map((r) => (r as HTMLElement).dataset.commentId)).toEqual(["cm1", "cm2", "cm3"]);
  });

  it("marks uncaught comments with the distinguished (yellow) style", async () => {
    mockFetch({ "GET /preview": PREVIEW_FIXTURE });
    const box = mount();
    type(box, "ugly");
    await flush(5);
    const rows = [...box.querySelectorAll(".preview-row")];
    expect(rows[0].classList.contains("uncaught")).toBe(true);
    expect(rows[1].classList.contains("uncaught")).toBe(true);
    expect(rows[2].classList.contains("uncaught")).toBe(false);
    // the stylesheet maps the class to the yellow background
    const css = readFileSync(join(process.cwd(), "src/styles.css"), "utf-8");
    expect(css).toMatch(/--uncaught:\s*#fef08a/);
    expect(css).toMatch(/\.preview-row\.uncaught\s*\{\s*background:\s*var\(--uncaught\)/);
  });

  it("renders highlight spans from the API response", async () => {
    mockFetch({ "GET /preview": PREVIEW_FIXTURE });
    const box = mount();
    type(box, "ugly");
    await flush(5);
    const firstRow = box.querySelectorAll(".preview-row")[0];
    expect(firstRow.querySelector("mark.hit")!.textContent).toBe("ugly");
  });

  it("debounces keystrokes into a single request", async () => {
    const { calls } = mockFetch({ "GET /preview": PREVIEW_FIXTURE });
    const box = mount(20);
    type(box, "u");
    type(box, "ug");
    type(box, "ugl");
    type(box, "ugly");
    await flush(60);
    const previews = calls.filter((c) => c.url.includes("/preview"));
    expect(previews).toHaveLength(1);
    expect(previews[0].url).toContain("text=ugly");
  });

  it("discards stale responses when requests resolve out of order", async () => {
    let callCount = 0;
    const resolvers: ((response: Response) => void)[] = [];
    vi.stubGlobal(
      "fetch",
      vi.fn(() => {
        callCount += 1;
        return new Promise<Response>((resolve) => resolvers.push(resolve));
      }),
    );
    const box = mount(0);
    type(box, "ug");
    await flush(5);
    type(box, "ugly");
    await flush(5);
    expect(callCount).toBe(2);

    const staleBody = { ...PREVIEW_FIXTURE, uncaught_count: 99, matches: [] };
    const json = (body: unknown) =>
      new Response(JSON.stringify(body), { status: 200, headers: { "Content-Type": "application/json" } });
    // newest resolves first, then the stale one arrives late
    resolvers[1](json(PREVIEW_FIXTURE));
    await flush(5);
    resolvers[0](json(staleBody));
    await flush(5);
    expect(box.querySelector(".uncaught-count")!.textContent).toBe("2 uncaught comments");
    expect(box.querySelectorAll(".preview-row")).toHaveLength(3);
  });

  it("clears the panel when the box is emptied", async () => {
    mockFetch({ "GET /preview": PREVIEW_FIXTURE });
    const box = mount();
    type(box, "ugly");
    await flush(5);
    type(box, "");
    await flush(5);
    expect(box.querySelector(".uncaught-count")!.textContent).toBe("");
    expect(box.querySelectorAll(".preview-row")).toHaveLength(0);
  });
});
