namespace floq {
namespace {
constexpr int placeholder_fit = 0;
}
}
