import { ApiClient } from "../api";
import { renderChart } from "../chart";
import { clear, el } from "../dom";
import { renderHighlighted } from "../highlight";
import { CommentPageView, CommentRowView, Span } from "../types";

const PAGE_SIZE = 25;

function commentRow(row: CommentRowView): HTMLElement {
  const spans: Span[] = row.phrase_spans.flatMap((p) => p.spans);
  const text = el("td", { class: "comment-text" });
  text.append(renderHighlighted(row.comment.text, spans));
  return el(
    "tr",
    { class: row.caught_by.length ? "caught" : "" },
    el("td", {}, row.comment.author_name),
    text,
    el("td", { class: "caught-by" }, row.caught_by.join(", ") || "—"),
    el("td", {}, row.comment.status),
    el("td", {}, row.comment.published_at.slice(0, 10)),
  );
}

/** Home page: 30-day per-category chart plus the all-comments table. */
export function overviewPage(api: ApiClient): HTMLElement {
  const chartHost = el("div", { class: "chart-host" });
  const tableBody = el("tbody", {});
  const pageInfo = el("span", { class: "page-info" });
  const searchInput = el("input", { type: "search", placeholder: "Search comments...", class: "search" });
  const sortSelect = el(
    "select",
    {},
    el("option", { value: "recency" }, "newest first"),
    el("option", { value: "author" }, "by author"),
    el("option", { value: "status" }, "by status"),
  ) as HTMLSelectElement;
  let page = 1;

  async function loadChart(): Promise<void> {
    const series = await api.categorySeries();
    clear(chartHost);
    chartHost.append(renderChart(series));
  }

  async function loadTable(): Promise<void> {
    const result: CommentPageView = await api.comments({
      search: (searchInput as HTMLInputElement).value || undefined,
      sort: sortSelect.value,
      page,
      page_size: PAGE_SIZE,
    });
    clear(tableBody);
    for (const row of result.items) tableBody.append(commentRow(row));
    const pages = Math.max(1, Math.ceil(result.total / PAGE_SIZE));
    pageInfo.textContent = `page ${result.page} of ${pages} (${result.total} comments)`;
  }

  searchInput.addEventListener("input", () => {
    page = 1;
    void loadTable();
  });
  sortSelect.addEventListener("change", () => {
    page = 1;
    void loadTable();
  });

  const root = el(
    "div",
    { class: "page overview" },
    el("h2", {}, "Overview"),
    el("p", { class: "hint" }, "Comments caught by each category, last 30 days"),
    chartHost,
    el(
      "div",
      { class: "table-controls" },
      searchInput,
      sortSelect,
      el("button", { onclick: () => { if (page > 1) { page -= 1; void loadTable(); } } }, "‹ prev"),
      el("button", { onclick: () => { page += 1; void loadTable(); } }, "next ›"),
      pageInfo,
    ),
    el(
      "table",
      { class: "comments" },
      el(
        "thead",
        {},
        el("tr", {}, el("th", {}, "author"), el("th", {}, "comment"), el("th", {}, "caught by"), el("th", {}, "status"), el("th", {}, "published")),
      ),
      tableBody,
    ),
  );

  void loadChart();
  void loadTable();
  return root;
}
