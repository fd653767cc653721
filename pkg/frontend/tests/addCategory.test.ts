import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api";
import { addCategoryPage } from "../src/pages/addCategory";
import { flush, mockFetch } from "./helpers";
import type { BuiltinView } from "../src/types";

afterEach(() => vi.unstubAllGlobals());

const BUILTINS: BuiltinView[] = [
  {
    builtin_id: "homophobia",
    name: "Homophobia",
    description: "Starter list targeting homophobic slurs and taunts.",
    authors: "seed data",
    rule_count: 4,
    example_rules: ["example-a", "example-b"],
    import_count: 7,
    version: 1,
  },
  {
    builtin_id: "anti_black_racism",
    name: "Anti-Black Racism",
    description: "Starter list targeting anti-Black slurs.",
    authors: "seed data",
    rule_count: 4,
    example_rules: ["example-c"],
    import_count: 2,
    version: 1,
  },
];

function mount(onNavigate = (_id: string) => undefined) {
  const api = new ApiClient("", "tok");
  const page = addCategoryPage(api, onNavigate);
  document.body.replaceChildren(page);
  return page;
}

describe("add-category page", () => {
  it("shows the five info-box fields for the selected builtin", async () => {
    mockFetch({ "GET /builtins": BUILTINS });
    const page = mount();
    await flush(5);
    const info = page.querySelector(".info-box")!.textContent!;
    expect(info).toContain("Starter list targeting homophobic slurs");
    expect(info).toContain("Authors: seed data");
    expect(info).toContain("Rules: 4");
    expect(info).toContain("Examples: example-a, example-b");
    expect(info).toContain("Imported by 7 users");
  });

  it("updates the info box when the dropdown changes", async () => {
    mockFetch({ "GET /builtins": BUILTINS });
    const page = mount();
    await flush(5);
    const select = page.querySelector(".builtin-select") as HTMLSelectElement;
    select.value = "anti_black_racism";
    select.dispatchEvent(new Event("change"));
    expect(page.querySelector(".info-box")!.textContent).toContain("Imported by 2 users");
  });

  it("import navigates to the new category page", async () => {
    const navigated: string[] = [];
    mockFetch({
      "GET /builtins": BUILTINS,
      "POST /builtins/homophobia/import": { category_id: "c42", name: "Homophobia", phrases: [] },
    });
    const page = mount((id) => {
      navigated.push(id);
      return undefined;
    });
    await flush(5);
    (page.querySelectorAll("button.primary")[1] as HTMLButtonElement).click();
    await flush(5);
    expect(navigated).toEqual(["c42"]);
  });

  it("clone of an unshared source surfaces the error inline", async () => {
    mockFetch({ "GET /builtins": BUILTINS });
    vi.stubGlobal(
      "fetch",
      vi.fn(async (input: RequestInfo | URL) => {
        const url = String(input);
        if (url.includes("/builtins")) {
          return new Response(JSON.stringify(BUILTINS), { status: 200 });
        }
        if (url.includes("/clone")) {
          return new Response(
            JSON.stringify({ error: "NotShared", message: "category c9 is not shared" }),
            { status: 400 },
          );
        }
        return new Response("{}", { status: 200 });
      }),
    );
    const page = mount();
    await flush(5);
    const cloneInput = page.querySelectorAll(".flow input")[1] as HTMLInputElement;
    cloneInput.value = "c9";
    (page.querySelectorAll("button.primary")[2] as HTMLButtonElement).click();
    await flush(5);
    expect(page.querySelector(".status")!.textContent).toContain("NotShared");
  });
});
