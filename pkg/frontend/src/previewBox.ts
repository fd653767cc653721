import { ApiClient, PreviewOptions } from "./api";
import { debounce, LatestOnly } from "./debounce";
import { clear, el } from "./dom";
import { renderHighlighted } from "./highlight";
import { ACTIONS, PreviewView } from "./types";

export const PREVIEW_DEBOUNCE_MS = 250;

/**
 * The "Add New Phrase" box: as the user types, a debounced preview call
 * lists the stored comments the candidate would catch. Comments no
 * configured phrase already catches get the distinguishing (yellow)
 * style, and the uncaught total sits on top. All flags and spans come
 * straight from the preview response.
 */
export function createAddPhraseBox(
  api: ApiClient,
  categoryId: string,
  onAdded: () => void,
  debounceMs: number = PREVIEW_DEBOUNCE_MS,
): HTMLElement {
  const textInput = el("input", { type: "text", placeholder: "Add new phrase...", class: "phrase-input" });
  const caseBox = el("input", { type: "checkbox" });
  const spellBox = el("input", { type: "checkbox" });
  const leetBox = el("input", { type: "checkbox" });
  const actionSelect = el(
    "select",
    { class: "action-select" },
    ...ACTIONS.map((a) => el("option", { value: a }, a)),
  );
  const countLabel = el("div", { class: "uncaught-count" });
  const results = el("div", { class: "preview-results" });
  const status = el("div", { class: "status" });

  const latest = new LatestOnly();

  function options(): PreviewOptions {
    return {
      case_sensitive: caseBox.checked,
      spell_variants: spellBox.checked,
      leet_variants: leetBox.checked && spellBox.checked,
    };
  }

  function renderPreview(view: PreviewView): void {
    countLabel.textContent = `${view.uncaught_count} uncaught comment${view.uncaught_count === 1 ? "" : "s"}`;
    clear(results);
    for (const match of view.matches) {
      const row = el("div", { class: match.already_caught ? "preview-row" : "preview-row uncaught" });
      row.dataset.commentId = match.comment_id;
      const text = el("span", { class: "comment-text" });
      text.append(renderHighlighted(match.text, match.spans));
      row.append(el("span", { class: "author" }, match.author_name), text);
      results.append(row);
    }
  }

  async function runPreview(): Promise<void> {
    const text = textInput.value;
    if (!text.trim()) {
      countLabel.textContent = "";
      clear(results);
      return;
    }
    const requestId = latest.issue();
    try {
      const view = await api.preview(text, options());
      if (!latest.isCurrent(requestId)) return; // stale keystroke
      renderPreview(view);
    } catch (error) {
      if (!latest.isCurrent(requestId)) return;
      countLabel.textContent = "";
      clear(results);
    }
  }

  const debouncedPreview = debounce(runPreview, debounceMs);
  textInput.addEventListener("input", () => debouncedPreview());
  for (const box of [caseBox, spellBox, leetBox]) {
    box.addEventListener("change", () => void runPreview());
  }

  const addButton = el("button", {
    class: "primary",
    onclick: async () => {
      status.textContent = "";
      try {
        await api.addPhrase(categoryId, {
          text: textInput.value,
          action: (actionSelect as HTMLSelectElement).value,
          ...options(),
        });
        textInput.value = "";
        countLabel.textContent = "";
        clear(results);
        onAdded();
      } catch (error: any) {
        status.textContent = `${error.code ?? "Error"}: ${error.message}`;
      }
    },
  }, "Add phrase");

  return el(
    "section",
    { class: "add-phrase" },
    el("h3", {}, "Add New Phrase"),
    el(
      "div",
      { class: "add-phrase-controls" },
      textInput,
      el("label", {}, caseBox, " case sensitive"),
      el("label", {}, spellBox, " spelling variants"),
      el("label", {}, leetBox, " leet variants"),
      actionSelect,
      addButton,
    ),
    status,
    countLabel,
    results,
  );
}
