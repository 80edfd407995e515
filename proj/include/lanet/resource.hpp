#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lanet {

/// The four kinds of course resource. Enumerator order is the canonical
/// within-chapter sort order (ln < vid < quiz < sub).
enum class ResourceKind : std::uint8_t { LectureNotes = 0, Video = 1, Quiz = 2, Submission = 3 };

std::string_view kind_prefix(ResourceKind kind);
std::optional<ResourceKind> kind_from_prefix(std::string_view prefix);

/// One course resource: a (kind, chapter) pair such as quiz_3 or ln_7.
/// Canonical string form is "<prefix>_<chapter>"; parse and format round-trip
/// losslessly. Ordering is (chapter, kind), which is the column order used by
/// engagement matrices.
struct ResourceId {
    ResourceKind kind = ResourceKind::LectureNotes;
    int chapter = 1;

    std::string name() const;

    /// Parse a canonical name. Rejects unknown prefixes, chapters < 1 and,
    /// when max_chapter > 0, chapters above it.
    static std::optional<ResourceId> parse(std::string_view text, int max_chapter = 0);

    friend auto operator<=>(const ResourceId& a, const ResourceId& b) {
        if (auto c = a.chapter <=> b.chapter; c != std::strong_ordering::equal) return c;
        return a.kind <=> b.kind;
    }
    friend bool operator==(const ResourceId&, const ResourceId&) = default;
};

/// Sort into canonical matrix column order and drop duplicates.
std::vector<ResourceId> canonical_order(std::vector<ResourceId> resources);

}  // namespace lanet
