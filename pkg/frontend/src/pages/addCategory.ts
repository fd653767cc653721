import { ApiClient } from "../api";
import { clear, el } from "../dom";
import { BuiltinView } from "../types";

/**
 * "Add a New Category" page with the three flows: create an empty
 * category, import a built-in (with its five-field info box), or clone
 * a category another user shared.
 */
export function addCategoryPage(api: ApiClient, goToCategory: (id: string) => void): HTMLElement {
  const status = el("div", { class: "status" });

  function fail(error: any): void {
    status.textContent = `${error.code ?? "Error"}: ${error.message ?? error}`;
  }

  // flow 1: from scratch
  const nameInput = el("input", { type: "text", placeholder: "Category name" }) as HTMLInputElement;
  const scratch = el(
    "section",
    { class: "flow" },
    el("h3", {}, "Create an empty category"),
    nameInput,
    el("button", {
      class: "primary",
      onclick: async () => {
        try {
          const category = await api.createCategory(nameInput.value);
          goToCategory(category.category_id);
        } catch (error) {
          fail(error);
        }
      },
    }, "Create"),
  );

  // flow 2: import a builtin, details shown in the info box
  const builtinSelect = el("select", { class: "builtin-select" }) as HTMLSelectElement;
  const infoBox = el("div", { class: "info-box" });
  let builtins: BuiltinView[] = [];

  function renderInfo(builtin: BuiltinView | undefined): void {
    clear(infoBox);
    if (!builtin) return;
    infoBox.append(
      el("p", { class: "description" }, builtin.description),
      el(
        "ul",
        {},
        el("li", {}, `Authors: ${builtin.authors}`),
        el("li", {}, `Rules: ${builtin.rule_count}`),
        el("li", {}, `Examples: ${builtin.example_rules.join(", ")}`),
        el("li", { class: "import-count" }, `Imported by ${builtin.import_count} user${builtin.import_count === 1 ? "" : "s"}`),
      ),
    );
  }

  builtinSelect.addEventListener("change", () => {
    renderInfo(builtins.find((b) => b.builtin_id === builtinSelect.value));
  });

  const builtinFlow = el(
    "section",
    { class: "flow" },
    el("h3", {}, "Import a built-in category"),
    builtinSelect,
    infoBox,
    el("button", {
      class: "primary",
      onclick: async () => {
        try {
          const category = await api.importBuiltin(builtinSelect.value);
          goToCategory(category.category_id);
        } catch (error) {
          fail(error);
        }
      },
    }, "Import"),
  );

  // flow 3: clone a category shared by another user
  const cloneInput = el("input", { type: "text", placeholder: "Shared category id" }) as HTMLInputElement;
  const cloneFlow = el(
    "section",
    { class: "flow" },
    el("h3", {}, "Clone a category shared by another user"),
    cloneInput,
    el("button", {
      class: "primary",
      onclick: async () => {
        try {
          const category = await api.cloneCategory(cloneInput.value);
          goToCategory(category.category_id);
        } catch (error) {
          fail(error); // e.g. NotShared shown inline
        }
      },
    }, "Clone"),
  );

  void api.listBuiltins().then((list) => {
    builtins = list;
    clear(builtinSelect);
    for (const builtin of list) {
      builtinSelect.append(el("option", { value: builtin.builtin_id }, builtin.name));
    }
    renderInfo(list[0]);
  });

  return el(
    "div",
    { class: "page add-category" },
    el("h2", {}, "Add a New Category"),
    status,
    scratch,
    builtinFlow,
    cloneFlow,
  );
}
