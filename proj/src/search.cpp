namespace floq {
namespace {
constexpr int placeholder_search = 0;
}
}
