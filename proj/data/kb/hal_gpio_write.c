void hal_gpio_write(uint32_t gpio_base, uint32_t pin_mask, uint8_t state) {
    volatile uint32_t *GPIO_ODR = (uint32_t *)(gpio_base + 0x14);
    if (state) {
        *GPIO_ODR |= pin_mask;
    } else {
        *GPIO_ODR &= ~pin_mask;
    }
}
